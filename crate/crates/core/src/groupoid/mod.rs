//! Reflections, Weyl groupoid enumeration, real roots and GK dimension.

mod decide;
mod engine;
mod entry;

use std::fmt;

use serde_json::{json, Value};

use crate::braiding::BraidingMatrix;
use crate::cartan::{cartan_data, DEFAULT_N_MAX};
use crate::error::{Error, Result};
use crate::scalars::{Scalar, Unit};
use engine::{Outcome, Raw};
use entry::{Entry, Fixed};

pub use decide::{decide_rank2, Rank2Decision, Shortcut};
pub use engine::EnumerationStats;

/// Resource limits for an enumeration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Caps {
    /// Distinct diagrams visited.
    pub max_matrices: usize,
    /// Largest coefficient sum of a tracked root.
    pub max_root_height: u64,
    /// (diagram, root map) pairs visited.
    pub max_states: usize,
    /// Search cap for Cartan entries with non-monomial entries.
    pub n_max: u64,
}

impl Default for Caps {
    fn default() -> Caps {
        Caps {
            max_matrices: 10_000,
            max_root_height: 1_000,
            max_states: 200_000,
            n_max: DEFAULT_N_MAX,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InfiniteReason {
    /// q_ii = 1 at a vertex with an incident edge.
    TrivialVertex { vertex: usize },
    /// No admissible Cartan entry at the vertex.
    NotReflectable { vertex: usize },
    /// Cartan type with an affine component.
    AffineCartan,
    /// A real root γ with q_{γ,γ} = 1.
    TrivialRootWeight { root: Vec<i64> },
    /// A loop at the seed whose root map is unipotent and not the identity.
    Shear { map: Vec<Vec<i64>> },
    /// A rank-2 shortcut fired.
    Shortcut(Shortcut),
}

impl InfiniteReason {
    /// Short machine-readable tag.
    pub fn tag(&self) -> &'static str {
        match self {
            InfiniteReason::TrivialVertex { .. } => "trivial-vertex",
            InfiniteReason::NotReflectable { .. } => "not-reflectable",
            InfiniteReason::AffineCartan => "affine",
            InfiniteReason::TrivialRootWeight { .. } => "root-weight-one",
            InfiniteReason::Shear { .. } => "shear",
            InfiniteReason::Shortcut(s) => s.tag(),
        }
    }
}

impl fmt::Display for InfiniteReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InfiniteReason::TrivialVertex { vertex } => {
                write!(f, "q_ii = 1 with an incident edge at vertex {}", vertex + 1)
            }
            InfiniteReason::NotReflectable { vertex } => {
                write!(f, "cannot reflect at vertex {}", vertex + 1)
            }
            InfiniteReason::AffineCartan => f.write_str("Cartan type of affine type"),
            InfiniteReason::TrivialRootWeight { root } => {
                write!(f, "root {root:?} has q_(γ,γ) = 1")
            }
            InfiniteReason::Shear { map } => write!(f, "shear loop at the seed with map {map:?}"),
            InfiniteReason::Shortcut(s) => write!(f, "{s}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    FiniteSystem,
    InfiniteDetected(InfiniteReason),
    /// A resource cap was hit before a decision; never a mathematical verdict.
    CapExceeded(String),
}

/// GK dimension: a number, ∞, or unknown (after a cap).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gk {
    Finite(u64),
    Infinite,
    Unknown,
}

impl fmt::Display for Gk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gk::Finite(n) => write!(f, "{n}"),
            Gk::Infinite => f.write_str("infinity"),
            Gk::Unknown => f.write_str("unknown"),
        }
    }
}

/// A positive real root with q_{β,β} and the height N_β (None for ∞).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootInfo {
    pub root: Vec<i64>,
    pub q: Scalar,
    pub height: Option<u64>,
}

#[derive(Clone, Debug)]
pub struct GroupoidReport {
    pub seed: BraidingMatrix,
    /// Visited matrices in discovery order; index 0 is the seed.
    pub matrices: Vec<BraidingMatrix>,
    /// Positive roots per visited matrix. Complete only for a finite
    /// system; otherwise `roots[0]` holds the seed roots found so far and
    /// the other lists are empty.
    pub roots: Vec<Vec<RootInfo>>,
    pub verdict: Verdict,
    /// Index into `matrices` where the verdict fired.
    pub verdict_matrix: Option<usize>,
    pub gk: Gk,
    pub stats: EnumerationStats,
}

impl GroupoidReport {
    pub fn seed_roots(&self) -> &[RootInfo] {
        &self.roots[0]
    }

    pub fn is_finite(&self) -> bool {
        self.verdict == Verdict::FiniteSystem
    }

    /// JSON report; scalars are written over one common cyclotomic order.
    pub fn to_json(&self) -> Value {
        let mut all: Vec<&Scalar> = vec![];
        for m in &self.matrices {
            for r in 0..m.theta() {
                for c in 0..m.theta() {
                    all.push(m.get(r, c));
                }
            }
        }
        for rs in &self.roots {
            all.extend(rs.iter().map(|r| &r.q));
        }
        let order = crate::scalars::common_order(all);
        let fmt = |s: &Scalar| s.lift_to(order).expect("common order").to_string();
        let matrices: Vec<Value> = self
            .matrices
            .iter()
            .map(|m| {
                let rows: Vec<Vec<String>> = m.rows().iter().map(|r| r.iter().map(fmt).collect()).collect();
                let d = m.diagram();
                json!({
                    "entries": rows,
                    "diagonal": d.vertex_labels.iter().map(fmt).collect::<Vec<_>>(),
                    "edges": d.edges.iter().map(|(i, j, s)| json!([i + 1, j + 1, fmt(s)])).collect::<Vec<_>>(),
                })
            })
            .collect();
        let roots: Vec<Value> = self
            .roots
            .iter()
            .map(|rs| {
                Value::Array(
                    rs.iter()
                        .map(|r| {
                            json!({
                                "root": r.root,
                                "q": fmt(&r.q),
                                "height": r.height.map_or(Value::String("infinity".into()), |h| json!(h)),
                            })
                        })
                        .collect(),
                )
            })
            .collect();
        json!({
            "cyclotomic_order": order,
            "theta": self.seed.theta(),
            "verdict": verdict_json(&self.verdict),
            "verdict_matrix": self.verdict_matrix.map(|i| i + 1),
            "gk": match self.gk {
                Gk::Finite(n) => json!(n),
                Gk::Infinite => json!("infinity"),
                Gk::Unknown => json!("unknown"),
            },
            "matrices": matrices,
            "roots": roots,
            "stats": {
                "states": self.stats.states,
                "edges": self.stats.edges,
                "edge_checks": self.stats.edge_checks,
                "edge_violations": self.stats.edge_violations,
                "weight_checks": self.stats.weight_checks,
                "weight_violations": self.stats.weight_violations,
            },
        })
    }
}

pub(crate) fn verdict_json(v: &Verdict) -> Value {
    match v {
        Verdict::FiniteSystem => json!({ "kind": "finite" }),
        Verdict::InfiniteDetected(r) => json!({
            "kind": "infinite",
            "reason": r.tag(),
            "detail": r.to_string(),
        }),
        Verdict::CapExceeded(msg) => json!({ "kind": "cap-exceeded", "detail": msg }),
    }
}

/// s_i on Z^θ as a matrix whose column j is s_i(α_j) = α_j − c_ij α_i.
pub fn simple_reflection(i: usize, c_row: &[i64]) -> Result<Vec<Vec<i64>>> {
    if i >= c_row.len() {
        return Err(Error::IndexOutOfRange {
            index: i,
            theta: c_row.len(),
        });
    }
    let m = engine::reflection_matrix(i, c_row);
    Ok(m.chunks(c_row.len()).map(|r| r.to_vec()).collect())
}

/// s_i(v) = v − (Σ_j c_ij v_j) α_i.
pub fn apply_simple_reflection(i: usize, c_row: &[i64], v: &[i64]) -> Vec<i64> {
    let mut out = v.to_vec();
    out[i] -= c_row.iter().zip(v).map(|(c, x)| c * x).sum::<i64>();
    out
}

/// The reflection R^i of a braiding matrix.
pub fn reflect_matrix(m: &BraidingMatrix, i: usize) -> Result<BraidingMatrix> {
    reflect_matrix_with_cap(m, i, DEFAULT_N_MAX)
}

pub fn reflect_matrix_with_cap(m: &BraidingMatrix, i: usize, n_max: u64) -> Result<BraidingMatrix> {
    m.check_index(i)?;
    let data = cartan_data(m, n_max)?;
    if !data.reflectable[i] {
        return Err(Error::NotReflectable(i + 1));
    }
    let n = m.theta();
    let order = m.cyclotomic_order();
    let entries: Vec<Fixed> = m
        .rows()
        .into_iter()
        .flatten()
        .map(|s| Fixed(s.lift_to(order).expect("divides")))
        .collect();
    let out = engine::reflect(&entries, n, i, &data.c[i]);
    Ok(BraidingMatrix::new_unchecked(
        n,
        out.into_iter().map(|f| f.0).collect(),
    ))
}

/// Entries of a matrix in the representation the engine runs on.
pub(crate) enum Lowered {
    Units(Vec<Unit>),
    Scalars(Vec<Fixed>),
}

pub(crate) fn lower(m: &BraidingMatrix) -> Lowered {
    let n = m.theta();
    let units: Option<Vec<Unit>> = (0..n * n).map(|k| m.get(k / n, k % n).as_unit()).collect();
    if let Some(us) = units {
        let l = us.iter().fold(1u32, |a, u| num_integer::lcm(a, u.n));
        return Lowered::Units(us.into_iter().map(|u| u.widen(l)).collect());
    }
    let order = m.cyclotomic_order();
    Lowered::Scalars(
        (0..n * n)
            .map(|k| Fixed(m.get(k / n, k % n).lift_to(order).expect("divides")))
            .collect(),
    )
}

fn report_from<E: Entry>(seed: &BraidingMatrix, raw: Raw<E>) -> GroupoidReport {
    let n = raw.theta;
    let to_matrix =
        |m: &[E]| BraidingMatrix::new_unchecked(n, m.iter().map(Entry::to_scalar).collect());
    let matrices: Vec<BraidingMatrix> = raw.objects.iter().map(|o| to_matrix(&o.m)).collect();
    let seed_m = &raw.objects[0].m;
    let info = |m: &[E], root: &[i64]| {
        let w = engine::bq_diag(m, n, root);
        RootInfo {
            root: root.to_vec(),
            height: w.height(),
            q: w.to_scalar(),
        }
    };
    let seed_roots: Vec<RootInfo> = raw.seed_roots.iter().map(|r| info(seed_m, r)).collect();
    let (verdict, gk) = match raw.outcome {
        Outcome::Finite => {
            let gk = seed_roots.iter().filter(|r| r.height.is_none()).count() as u64;
            (Verdict::FiniteSystem, Gk::Finite(gk))
        }
        Outcome::Infinite(r) => (Verdict::InfiniteDetected(r), Gk::Infinite),
        Outcome::Cap(msg) => (Verdict::CapExceeded(msg), Gk::Unknown),
    };
    let mut roots = vec![seed_roots];
    if verdict == Verdict::FiniteSystem {
        for (idx, obj) in raw.objects.iter().enumerate().skip(1) {
            let t = &raw.first_map[idx];
            let mut rs: Vec<Vec<i64>> = raw
                .seed_roots
                .iter()
                .map(|b| {
                    let v: Vec<i64> = (0..n).map(|r| (0..n).map(|c| t[r * n + c] * b[c]).sum()).collect();
                    if v.iter().all(|&x| x <= 0) {
                        v.iter().map(|x| -x).collect()
                    } else {
                        v
                    }
                })
                .collect();
            rs.sort();
            roots.push(rs.iter().map(|r| info(&obj.m, r)).collect());
        }
    } else {
        roots.extend((1..matrices.len()).map(|_| vec![]));
    }
    GroupoidReport {
        seed: seed.clone(),
        matrices,
        roots,
        verdict,
        verdict_matrix: raw.verdict_object,
        gk,
        stats: raw.stats,
    }
}

pub(crate) fn enumerate_with(
    m: &BraidingMatrix,
    caps: &Caps,
    hook: &mut dyn FnMut(&BraidingMatrix) -> Option<InfiniteReason>,
) -> Result<GroupoidReport> {
    if caps.max_matrices == 0 || caps.max_root_height == 0 || caps.max_states == 0 || caps.n_max == 0 {
        return Err(Error::OutOfRange("caps must be positive".into()));
    }
    let n = m.theta();
    Ok(match lower(m) {
        Lowered::Units(us) => {
            let mut h = |e: &[Unit], _id: usize| {
                hook(&BraidingMatrix::new_unchecked(n, e.iter().map(|u| u.to_scalar()).collect()))
            };
            report_from(m, engine::run(us, n, caps, &mut h))
        }
        Lowered::Scalars(fs) => {
            let mut h = |e: &[Fixed], _id: usize| {
                hook(&BraidingMatrix::new_unchecked(n, e.iter().map(|f| f.0.clone()).collect()))
            };
            report_from(m, engine::run(fs, n, caps, &mut h))
        }
    })
}

/// Closure of {M} under reflections with real-root tracking and verdicts.
pub fn enumerate(m: &BraidingMatrix, caps: &Caps) -> Result<GroupoidReport> {
    enumerate_with(m, caps, &mut |_| None)
}

/// GK dimension read off a report.
pub fn gk_dimension(report: &GroupoidReport) -> Gk {
    match report.verdict {
        Verdict::FiniteSystem => Gk::Finite(
            report
                .seed_roots()
                .iter()
                .filter(|r| r.height.is_none())
                .count() as u64,
        ),
        Verdict::InfiniteDetected(_) => Gk::Infinite,
        Verdict::CapExceeded(_) => Gk::Unknown,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u32, k: i64) -> Scalar {
        Scalar::root_of_unity(n, k)
    }

    #[test]
    fn simple_reflections() {
        let c = [2, -1];
        assert_eq!(apply_simple_reflection(0, &c, &[1, 0]), vec![-1, 0]);
        assert_eq!(apply_simple_reflection(0, &c, &[0, 1]), vec![1, 1]);
        assert_eq!(apply_simple_reflection(0, &[2, -4], &[0, 1]), vec![4, 1]);
        assert_eq!(simple_reflection(0, &[2, -4]).unwrap(), vec![vec![-1, 4], vec![0, 1]]);
    }

    #[test]
    fn decoupled_reflection_is_identity_on_diagram() {
        let m = BraidingMatrix::rank2(z(3, 1), Scalar::one(), z(5, 2)).unwrap();
        assert_eq!(reflect_matrix(&m, 0).unwrap().diagram(), m.diagram());
    }

    #[test]
    fn reflection_of_qzeta3_diagram() {
        // (ζ, r, −1) reflected at the second vertex gives (−ζ r, r⁻¹, −1).
        let r = Scalar::q();
        let w = z(3, 1);
        let m = BraidingMatrix::rank2(w.clone(), r.clone(), -Scalar::one()).unwrap();
        let d = reflect_matrix(&m, 1).unwrap().diagram();
        assert_eq!(d.vertex_labels, vec![-(&w * &r), -Scalar::one()]);
        assert_eq!(d.edge_label(0, 1), Some(&r.inv().unwrap()));
    }

    #[test]
    fn semigeneric_reflection_formula() {
        // (q_ii, q_jj^{-h}, q_jj) ↦ (q_ii, q_ii² q_jj^h, q_ii q_jj^{1−h(N−1)}) for N = ord q_ii.
        let q = Scalar::q();
        for (n, h) in [(3u32, 1i64), (4, 2), (5, 3), (6, 1)] {
            let qi = z(n, 1);
            let m = BraidingMatrix::rank2(qi.clone(), q.pow(-h).unwrap(), q.clone()).unwrap();
            let d = reflect_matrix(&m, 0).unwrap().diagram();
            assert_eq!(d.vertex_labels[0], qi);
            assert_eq!(d.edge_label(0, 1).unwrap(), &(qi.powu(2) * q.pow(h).unwrap()));
            assert_eq!(
                d.vertex_labels[1],
                &qi * q.pow(1 - h * (n as i64 - 1)).unwrap()
            );
        }
    }

    #[test]
    fn a2_at_cube_root_is_finite() {
        let m = BraidingMatrix::rank2(z(3, 1), z(3, -1), z(3, 1)).unwrap();
        let rep = enumerate(&m, &Caps::default()).unwrap();
        assert_eq!(rep.verdict, Verdict::FiniteSystem);
        let roots: Vec<Vec<i64>> = rep.seed_roots().iter().map(|r| r.root.clone()).collect();
        assert_eq!(roots, vec![vec![0, 1], vec![1, 0], vec![1, 1]]);
        assert!(rep.seed_roots().iter().all(|r| r.height == Some(3) && r.q == z(3, 1)));
        assert_eq!(gk_dimension(&rep), Gk::Finite(0));
        assert_eq!(rep.stats.edge_violations, 0);
        assert_eq!(rep.stats.weight_violations, 0);
    }

    #[test]
    fn generic_a2_has_gk_three() {
        let q = Scalar::q();
        let m = BraidingMatrix::rank2(q.clone(), q.inv().unwrap(), q.clone()).unwrap();
        let rep = enumerate(&m, &Caps::default()).unwrap();
        assert_eq!(rep.verdict, Verdict::FiniteSystem);
        assert_eq!(rep.gk, Gk::Finite(3));
    }

    #[test]
    fn affine_cartan_detected() {
        let q = Scalar::q();
        let m = BraidingMatrix::rank2(q.clone(), q.pow(-2).unwrap(), q.clone()).unwrap();
        let rep = enumerate(&m, &Caps::default()).unwrap();
        assert_eq!(rep.verdict, Verdict::InfiniteDetected(InfiniteReason::AffineCartan));
        assert_eq!(gk_dimension(&rep), Gk::Infinite);
    }

    #[test]
    fn not_reflectable_detected() {
        let p = Scalar::q();
        let m = BraidingMatrix::rank2(p.clone(), p.powu(4), p.powu(4)).unwrap();
        let rep = enumerate(&m, &Caps::default()).unwrap();
        assert_eq!(
            rep.verdict,
            Verdict::InfiniteDetected(InfiniteReason::NotReflectable { vertex: 0 })
        );
    }

    #[test]
    fn decoupled_vertices() {
        let m = BraidingMatrix::rank2(z(4, 1), Scalar::one(), Scalar::q()).unwrap();
        let rep = enumerate(&m, &Caps::default()).unwrap();
        assert_eq!(rep.verdict, Verdict::FiniteSystem);
        assert_eq!(rep.seed_roots().len(), 2);
        assert_eq!(rep.gk, Gk::Finite(1));
    }

    #[test]
    fn caps_are_reported_separately() {
        let q = Scalar::q();
        // Indefinite Cartan type [[2,-3],[-3,2]]: roots grow without bound.
        let m = BraidingMatrix::rank2(q.clone(), q.pow(-3).unwrap(), q.clone()).unwrap();
        let rep = enumerate(&m, &Caps::default()).unwrap();
        assert!(matches!(rep.verdict, Verdict::CapExceeded(_)));
        assert_eq!(rep.gk, Gk::Unknown);
    }

    #[test]
    fn json_report_shape() {
        let m = BraidingMatrix::rank2(z(3, 1), z(3, -1), z(3, 1)).unwrap();
        let rep = enumerate(&m, &Caps::default()).unwrap();
        let v = rep.to_json();
        assert_eq!(v["verdict"]["kind"], "finite");
        assert_eq!(v["gk"], 0);
        assert_eq!(v["roots"][0].as_array().unwrap().len(), 3);
    }
}
