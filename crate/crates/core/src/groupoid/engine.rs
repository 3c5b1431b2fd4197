//! Breadth-first closure of a braiding matrix under reflections.
//!
//! A state is an object (a diagram class) together with the integer map w
//! from seed coordinates to object coordinates accumulated along the path.
//! Real roots of the seed are the columns of w⁻¹ at every state.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use super::entry::Entry;
use super::{Caps, InfiniteReason};
use crate::cartan::{classify_gcm, CartanEntry, GcmClass};

pub(crate) type IntMat = Vec<i64>; // row-major θ×θ

pub(crate) struct Obj<E> {
    pub m: Vec<E>,
    /// Cartan rows; `None` once a vertex is not reflectable.
    pub c: Option<Vec<Vec<i64>>>,
}

pub(crate) enum Outcome {
    Finite,
    Infinite(InfiniteReason),
    Cap(String),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EnumerationStats {
    pub states: usize,
    pub edges: usize,
    pub edge_checks: usize,
    pub edge_violations: usize,
    pub weight_checks: usize,
    pub weight_violations: usize,
}

pub(crate) struct Raw<E> {
    pub theta: usize,
    pub objects: Vec<Obj<E>>,
    /// One map per object: seed coordinates → object coordinates.
    pub first_map: Vec<IntMat>,
    pub seed_roots: BTreeSet<Vec<i64>>,
    pub outcome: Outcome,
    pub verdict_object: Option<usize>,
    pub stats: EnumerationStats,
}

pub(crate) type Hook<'a, E> = dyn FnMut(&[E], usize) -> Option<InfiniteReason> + 'a;

fn identity(n: usize) -> IntMat {
    let mut m = vec![0; n * n];
    for i in 0..n {
        m[i * n + i] = 1;
    }
    m
}

fn matmul(a: &IntMat, b: &IntMat, n: usize) -> Option<IntMat> {
    let mut out = vec![0i64; n * n];
    for i in 0..n {
        for k in 0..n {
            let x = a[i * n + k];
            if x == 0 {
                continue;
            }
            for j in 0..n {
                let v = x.checked_mul(b[k * n + j])?;
                out[i * n + j] = out[i * n + j].checked_add(v)?;
            }
        }
    }
    Some(out)
}

/// s_i as a matrix: column j is s_i(α_j) = α_j − c_ij α_i.
pub(crate) fn reflection_matrix(i: usize, c_row: &[i64]) -> IntMat {
    let n = c_row.len();
    let mut m = identity(n);
    for j in 0..n {
        m[i * n + j] -= c_row[j];
    }
    m
}

fn is_unipotent(t: &IntMat, n: usize) -> bool {
    let mut d: Vec<i128> = t.iter().map(|&x| x as i128).collect();
    for i in 0..n {
        d[i * n + i] -= 1;
    }
    let mut p = d.clone();
    for _ in 1..n {
        let mut next = vec![0i128; n * n];
        for i in 0..n {
            for k in 0..n {
                for j in 0..n {
                    match p[i * n + k].checked_mul(d[k * n + j]) {
                        Some(v) => next[i * n + j] = next[i * n + j].saturating_add(v),
                        None => return false,
                    }
                }
            }
        }
        p = next;
    }
    p.iter().all(|&x| x == 0)
}

pub(crate) fn diagram_key<E: Entry>(m: &[E], n: usize) -> Vec<E> {
    let mut key: Vec<E> = (0..n).map(|i| m[i * n + i].clone()).collect();
    for i in 0..n {
        for j in i + 1..n {
            key.push(m[i * n + j].mul(&m[j * n + i]));
        }
    }
    key
}

/// q_{β,β} in the matrix `m`.
pub(crate) fn bq_diag<E: Entry>(m: &[E], n: usize, beta: &[i64]) -> E {
    let mut acc: Option<E> = None;
    let mut push = |x: E| {
        acc = Some(match acc.take() {
            None => x,
            Some(a) => a.mul(&x),
        })
    };
    for i in 0..n {
        if beta[i] != 0 {
            push(m[i * n + i].pow(beta[i] * beta[i]));
        }
        for j in i + 1..n {
            if beta[i] != 0 && beta[j] != 0 {
                push(m[i * n + j].mul(&m[j * n + i]).pow(beta[i] * beta[j]));
            }
        }
    }
    acc.unwrap_or_else(|| m[0].pow(0))
}

/// t_jk = q_jk q_ik^{−c_ij} q_ji^{−c_ik} q_ii^{c_ij c_ik}.
pub(crate) fn reflect<E: Entry>(m: &[E], n: usize, i: usize, c_row: &[i64]) -> Vec<E> {
    let mut out = Vec::with_capacity(n * n);
    for j in 0..n {
        for k in 0..n {
            let v = m[j * n + k]
                .mul(&m[i * n + k].pow(-c_row[j]))
                .mul(&m[j * n + i].pow(-c_row[k]))
                .mul(&m[i * n + i].pow(c_row[j] * c_row[k]));
            out.push(v);
        }
    }
    out
}

pub(crate) fn components<E: Entry>(m: &[E], n: usize) -> Vec<Vec<usize>> {
    let mut comp = vec![usize::MAX; n];
    let mut out = vec![];
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        let id = out.len();
        comp[s] = id;
        let mut members = vec![s];
        let mut k = 0;
        while k < members.len() {
            let v = members[k];
            for w in 0..n {
                if w != v && comp[w] == usize::MAX && !m[v * n + w].mul(&m[w * n + v]).is_one() {
                    comp[w] = id;
                    members.push(w);
                }
            }
            k += 1;
        }
        members.sort_unstable();
        out.push(members);
    }
    out
}

struct Checked {
    c: Option<Vec<Vec<i64>>>,
    verdict: Option<Result<InfiniteReason, String>>,
    cartan_type: bool,
}

fn check_object<E: Entry>(m: &[E], n: usize, caps: &Caps) -> Checked {
    // (a) a trivial vertex joined to the rest of the diagram
    for i in 0..n {
        if m[i * n + i].is_one()
            && (0..n).any(|j| j != i && !m[i * n + j].mul(&m[j * n + i]).is_one())
        {
            return Checked {
                c: None,
                verdict: Some(Ok(InfiniteReason::TrivialVertex { vertex: i })),
                cartan_type: false,
            };
        }
    }
    // (b) reflectability
    let mut rows = vec![vec![0i64; n]; n];
    for i in 0..n {
        rows[i][i] = 2;
        for j in 0..n {
            if i == j {
                continue;
            }
            let t = m[i * n + j].mul(&m[j * n + i]);
            match E::cartan(&m[i * n + i], &t, caps.n_max) {
                CartanEntry::Value(v) => rows[i][j] = v,
                CartanEntry::NotReflectable { exact: true } => {
                    return Checked {
                        c: None,
                        verdict: Some(Ok(InfiniteReason::NotReflectable { vertex: i })),
                        cartan_type: false,
                    }
                }
                CartanEntry::NotReflectable { exact: false } => {
                    return Checked {
                        c: None,
                        verdict: Some(Err(format!(
                            "Cartan entry search at vertex {} exhausted the cap of {}",
                            i + 1,
                            caps.n_max
                        ))),
                        cartan_type: false,
                    }
                }
            }
        }
    }
    // (c) Cartan type with an affine component
    let cartan_type = (0..n).all(|i| {
        (0..n).all(|j| {
            i == j
                || m[i * n + i]
                    .pow(-rows[i][j])
                    .mul(&m[i * n + j].mul(&m[j * n + i]))
                    .is_one()
        })
    });
    if cartan_type {
        for comp in components(m, n) {
            if comp.len() < 2 {
                continue;
            }
            let sub: Vec<Vec<i64>> = comp
                .iter()
                .map(|&i| comp.iter().map(|&j| rows[i][j]).collect())
                .collect();
            if classify_gcm(&sub) == Ok(GcmClass::Affine) {
                return Checked {
                    c: Some(rows),
                    verdict: Some(Ok(InfiniteReason::AffineCartan)),
                    cartan_type,
                };
            }
        }
    }
    Checked {
        c: Some(rows),
        verdict: None,
        cartan_type,
    }
}

pub(crate) fn run<E: Entry>(seed: Vec<E>, n: usize, caps: &Caps, hook: &mut Hook<'_, E>) -> Raw<E> {
    let mut raw = Raw {
        theta: n,
        objects: vec![],
        first_map: vec![],
        seed_roots: BTreeSet::new(),
        outcome: Outcome::Finite,
        verdict_object: None,
        stats: EnumerationStats::default(),
    };
    let mut keys: HashMap<Vec<E>, usize> = HashMap::new();
    let mut cartan_type: Vec<bool> = vec![];

    macro_rules! finish {
        ($outcome:expr, $obj:expr) => {{
            raw.outcome = $outcome;
            raw.verdict_object = $obj;
            return raw;
        }};
    }

    // Registers an object, returning its index or an outcome that ends the run.
    let mut add_object = |raw: &mut Raw<E>,
                          keys: &mut HashMap<Vec<E>, usize>,
                          cartan_type: &mut Vec<bool>,
                          m: Vec<E>,
                          map: &IntMat|
     -> Result<usize, (Outcome, usize)> {
        let key = diagram_key(&m, n);
        if let Some(&id) = keys.get(&key) {
            return Ok(id);
        }
        let id = raw.objects.len();
        if id >= caps.max_matrices {
            return Err((
                Outcome::Cap(format!("more than {} matrices", caps.max_matrices)),
                id,
            ));
        }
        let checked = check_object(&m, n, caps);
        keys.insert(key, id);
        cartan_type.push(checked.cartan_type);
        raw.objects.push(Obj {
            m: m.clone(),
            c: checked.c,
        });
        raw.first_map.push(map.clone());
        match checked.verdict {
            Some(Ok(r)) => return Err((Outcome::Infinite(r), id)),
            Some(Err(msg)) => return Err((Outcome::Cap(msg), id)),
            None => {}
        }
        if let Some(r) = hook(&m, id) {
            return Err((Outcome::Infinite(r), id));
        }
        Ok(id)
    };

    let id = identity(n);
    if let Err((o, at)) = add_object(&mut raw, &mut keys, &mut cartan_type, seed.clone(), &id) {
        finish!(o, Some(at));
    }
    let seed_connected_rank2 = n == 2 && !seed[1].mul(&seed[2]).is_one();
    for j in 0..n {
        let mut a = vec![0i64; n];
        a[j] = 1;
        raw.seed_roots.insert(a);
    }
    for j in 0..n {
        if seed[j * n + j].is_one() && (seed_connected_rank2 || cartan_type[0]) {
            let mut a = vec![0i64; n];
            a[j] = 1;
            finish!(Outcome::Infinite(InfiniteReason::TrivialRootWeight { root: a }), Some(0));
        }
    }

    let mut visited: HashSet<(usize, IntMat)> = HashSet::new();
    visited.insert((0, id.clone()));
    let mut queue: VecDeque<(usize, IntMat, IntMat)> = VecDeque::new();
    queue.push_back((0, id.clone(), id));
    raw.stats.states = 1;

    while let Some((x, t, tinv)) = queue.pop_front() {
        for i in 0..n {
            let c_row = raw.objects[x].c.as_ref().expect("expanded objects are reflectable")[i].clone();
            let new_m = reflect(&raw.objects[x].m, n, i, &c_row);
            let s = reflection_matrix(i, &c_row);
            let (Some(t2), Some(tinv2)) = (matmul(&s, &t, n), matmul(&tinv, &s, n)) else {
                finish!(Outcome::Cap("integer overflow in root coordinates".into()), Some(x));
            };
            raw.stats.edges += 1;
            // Diagonal values are carried along the edge: q'_{s(α_j)} = q_jj.
            for j in 0..n {
                let beta: Vec<i64> = (0..n).map(|r| s[r * n + j]).collect();
                raw.stats.edge_checks += 1;
                if bq_diag(&new_m, n, &beta) != raw.objects[x].m[j * n + j] {
                    raw.stats.edge_violations += 1;
                }
            }
            let y = match add_object(&mut raw, &mut keys, &mut cartan_type, new_m, &t2) {
                Ok(y) => y,
                Err((o, at)) => finish!(o, Some(at)),
            };
            if !visited.insert((y, t2.clone())) {
                continue;
            }
            raw.stats.states += 1;
            if raw.stats.states > caps.max_states {
                finish!(Outcome::Cap(format!("more than {} groupoid states", caps.max_states)), Some(y));
            }
            for j in 0..n {
                let col: Vec<i64> = (0..n).map(|r| tinv2[r * n + j]).collect();
                let root: Vec<i64> = if col.iter().all(|&v| v >= 0) {
                    col
                } else if col.iter().all(|&v| v <= 0) {
                    col.iter().map(|v| -v).collect()
                } else {
                    // Mixed signs cannot occur for a root; count it as a violation.
                    raw.stats.weight_violations += 1;
                    continue;
                };
                let height: i64 = root.iter().sum();
                if height as u64 > caps.max_root_height {
                    finish!(
                        Outcome::Cap(format!("a root of height {height} exceeds the cap of {}", caps.max_root_height)),
                        Some(y)
                    );
                }
                let qy = raw.objects[y].m[j * n + j].clone();
                raw.stats.weight_checks += 1;
                if bq_diag(&seed, n, &root) != qy {
                    raw.stats.weight_violations += 1;
                }
                // (d) a root of weight one
                if qy.is_one() && (seed_connected_rank2 || cartan_type[0]) {
                    finish!(Outcome::Infinite(InfiniteReason::TrivialRootWeight { root }), Some(y));
                }
                raw.seed_roots.insert(root);
            }
            // (e) a nontrivial unipotent loop at the seed
            if y == 0 && t2 != identity(n) && is_unipotent(&t2, n) {
                let map = t2.chunks(n).map(|r| r.to_vec()).collect();
                finish!(Outcome::Infinite(InfiniteReason::Shear { map }), Some(0));
            }
            queue.push_back((y, t2, tinv2));
        }
    }
    raw.outcome = Outcome::Finite;
    raw
}
