//! Braiding matrices of diagonal type and their generalized Dynkin diagrams.

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::expr::parse_scalar;
use crate::scalars::{common_order, parse_literal, Order, Scalar, ScalarKey};

/// A θ×θ matrix (q_ij) of nonzero scalars. Vertices are 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BraidingMatrix {
    theta: usize,
    entries: Vec<Scalar>,
}

/// Vertices decorated by q_ii, edges by q̃_ij ≠ 1 (i < j).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DynkinDiagram {
    pub vertex_labels: Vec<Scalar>,
    pub edges: Vec<(usize, usize, Scalar)>,
}

impl DynkinDiagram {
    pub fn theta(&self) -> usize {
        self.vertex_labels.len()
    }

    pub fn edge_label(&self, i: usize, j: usize) -> Option<&Scalar> {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        self.edges
            .iter()
            .find(|(x, y, _)| *x == a && *y == b)
            .map(|(_, _, s)| s)
    }

    /// Connected components, each sorted, listed by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.theta();
        let mut comp = vec![usize::MAX; n];
        let mut out = vec![];
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![start];
            comp[start] = id;
            let mut k = 0;
            while k < members.len() {
                let v = members[k];
                for (a, b, _) in &self.edges {
                    let w = if *a == v {
                        *b
                    } else if *b == v {
                        *a
                    } else {
                        continue;
                    };
                    if comp[w] == usize::MAX {
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

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }
}

/// The torsion / generic / semigeneric trichotomy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub enum BraidingClass {
    Torsion,
    Generic,
    Semigeneric,
}

impl BraidingMatrix {
    /// Validates a square matrix of nonzero entries with q_ii ≠ 1.
    pub fn new(rows: Vec<Vec<Scalar>>) -> Result<BraidingMatrix> {
        let m = BraidingMatrix::from_rows_unchecked(rows)?;
        for (idx, e) in m.entries.iter().enumerate() {
            if e.is_zero() {
                return Err(Error::InvalidMatrix(format!(
                    "entry ({}, {}) is zero",
                    idx / m.theta + 1,
                    idx % m.theta + 1
                )));
            }
        }
        for i in 0..m.theta {
            if m.get(i, i).is_one() {
                return Err(Error::TrivialDiagonal(i + 1));
            }
        }
        Ok(m)
    }

    fn from_rows_unchecked(rows: Vec<Vec<Scalar>>) -> Result<BraidingMatrix> {
        let theta = rows.len();
        if theta == 0 {
            return Err(Error::InvalidMatrix("rank must be at least 1".into()));
        }
        if rows.iter().any(|r| r.len() != theta) {
            return Err(Error::InvalidMatrix("matrix is not square".into()));
        }
        Ok(BraidingMatrix {
            theta,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    /// Builds a matrix without the q_ii ≠ 1 check; used for reflections,
    /// which may legitimately produce a trivial diagonal entry.
    pub(crate) fn new_unchecked(theta: usize, entries: Vec<Scalar>) -> BraidingMatrix {
        debug_assert_eq!(entries.len(), theta * theta);
        BraidingMatrix { theta, entries }
    }

    /// The representative with q_ij = q̃_ij for i < j and q_ji = 1, so that
    /// its diagram is the given one.
    pub fn from_diagram(diag: &DynkinDiagram) -> Result<BraidingMatrix> {
        let n = diag.theta();
        let mut rows = vec![vec![Scalar::one(); n]; n];
        for i in 0..n {
            rows[i][i] = diag.vertex_labels[i].clone();
        }
        for (i, j, s) in &diag.edges {
            if *i >= n || *j >= n || i == j {
                return Err(Error::InvalidMatrix("edge outside the diagram".into()));
            }
            let (a, b) = if i < j { (*i, *j) } else { (*j, *i) };
            rows[a][b] = s.clone();
        }
        BraidingMatrix::new(rows)
    }

    /// Rank-2 matrix with diagram (q11, q̃12, q22).
    pub fn rank2(q11: Scalar, qt12: Scalar, q22: Scalar) -> Result<BraidingMatrix> {
        BraidingMatrix::new(vec![vec![q11, qt12], vec![Scalar::one(), q22]])
    }

    pub fn theta(&self) -> usize {
        self.theta
    }

    /// q_ij, 0-based. Panics on an out-of-range index; see [`Self::entry`].
    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.theta + j]
    }

    pub fn entry(&self, i: usize, j: usize) -> Result<&Scalar> {
        self.check_index(i)?;
        self.check_index(j)?;
        Ok(self.get(i, j))
    }

    pub fn rows(&self) -> Vec<Vec<Scalar>> {
        self.entries.chunks(self.theta).map(|r| r.to_vec()).collect()
    }

    pub(crate) fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.theta {
            Err(Error::IndexOutOfRange {
                index: i,
                theta: self.theta,
            })
        } else {
            Ok(())
        }
    }

    /// q̃_ij = q_ij q_ji.
    pub fn qtilde(&self, i: usize, j: usize) -> Result<Scalar> {
        self.check_index(i)?;
        self.check_index(j)?;
        if i == j {
            return Err(Error::EqualIndices(i));
        }
        Ok(self.get(i, j) * self.get(j, i))
    }

    pub fn diagram(&self) -> DynkinDiagram {
        let vertex_labels = (0..self.theta).map(|i| self.get(i, i).clone()).collect();
        let mut edges = vec![];
        for i in 0..self.theta {
            for j in i + 1..self.theta {
                let t = self.get(i, j) * self.get(j, i);
                if !t.is_one() {
                    edges.push((i, j, t));
                }
            }
        }
        DynkinDiagram {
            vertex_labels,
            edges,
        }
    }

    pub fn components(&self) -> Vec<Vec<usize>> {
        self.diagram().components()
    }

    /// The principal submatrix on the given vertices.
    pub fn restrict(&self, vertices: &[usize]) -> BraidingMatrix {
        let entries = vertices
            .iter()
            .flat_map(|&i| vertices.iter().map(move |&j| (i, j)))
            .map(|(i, j)| self.get(i, j).clone())
            .collect();
        BraidingMatrix::new_unchecked(vertices.len(), entries)
    }

    /// Torsion iff every q_ii and q̃_ij has finite order; generic iff every
    /// q_ii has infinite order and every q̃_ij is 1 or of infinite order.
    pub fn classify_class(&self) -> BraidingClass {
        let finite = |s: &Scalar| matches!(s.order_of(), Ok(Order::Finite(_)));
        let diag_finite: Vec<bool> = (0..self.theta).map(|i| finite(self.get(i, i))).collect();
        let mut edges_finite = true;
        let mut edges_generic = true;
        for i in 0..self.theta {
            for j in i + 1..self.theta {
                let t = self.get(i, j) * self.get(j, i);
                if !finite(&t) {
                    edges_finite = false;
                } else if !t.is_one() {
                    edges_generic = false;
                }
            }
        }
        if diag_finite.iter().all(|&b| b) && edges_finite {
            BraidingClass::Torsion
        } else if diag_finite.iter().all(|&b| !b) && edges_generic {
            BraidingClass::Generic
        } else {
            BraidingClass::Semigeneric
        }
    }

    /// The class of each connected component of the diagram.
    pub fn component_classes(&self) -> Vec<(Vec<usize>, BraidingClass)> {
        self.components()
            .into_iter()
            .map(|c| {
                let cls = self.restrict(&c).classify_class();
                (c, cls)
            })
            .collect()
    }

    /// The bicharacter q_{a,b} = ∏ q_ij^{a_i b_j} on Z^θ.
    pub fn bq(&self, a: &[i64], b: &[i64]) -> Result<Scalar> {
        if a.len() != self.theta || b.len() != self.theta {
            return Err(Error::OutOfRange(format!(
                "degree vectors must have length {}",
                self.theta
            )));
        }
        let mut acc = Scalar::one();
        for i in 0..self.theta {
            if a[i] == 0 {
                continue;
            }
            for j in 0..self.theta {
                if b[j] == 0 {
                    continue;
                }
                acc = acc * self.get(i, j).pow(a[i] * b[j])?;
            }
        }
        Ok(acc)
    }

    /// lcm of the cyclotomic orders of all entries.
    pub fn cyclotomic_order(&self) -> u32 {
        common_order(&self.entries)
    }

    /// The same matrix with every entry expressed over Q(ζ_m).
    pub fn lift_to(&self, m: u32) -> Result<BraidingMatrix> {
        Ok(BraidingMatrix {
            theta: self.theta,
            entries: self
                .entries
                .iter()
                .map(|e| e.lift_to(m))
                .collect::<Result<_>>()?,
        })
    }

    /// Key identifying the diagram (diagonal and q̃) at a fixed order.
    pub fn diagram_key(&self, m: u32) -> Result<Vec<ScalarKey>> {
        let mut out = vec![];
        for i in 0..self.theta {
            out.push(self.get(i, i).key_at(m)?);
        }
        for i in 0..self.theta {
            for j in i + 1..self.theta {
                out.push((self.get(i, j) * self.get(j, i)).key_at(m)?);
            }
        }
        Ok(out)
    }

    /// JSON form `{"cyclotomic_order", "theta", "entries"}` with all
    /// entries written over the common order.
    pub fn to_json(&self) -> Value {
        let m = self.cyclotomic_order();
        let rows: Vec<Value> = self
            .entries
            .chunks(self.theta)
            .map(|r| {
                Value::Array(
                    r.iter()
                        .map(|e| Value::String(e.lift_to(m).expect("divides").to_string()))
                        .collect(),
                )
            })
            .collect();
        json!({ "cyclotomic_order": m, "theta": self.theta, "entries": rows })
    }

    pub fn from_json_str(text: &str) -> Result<BraidingMatrix> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse {
            context: "matrix JSON".into(),
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        BraidingMatrix::from_json(&v)
    }

    pub fn from_json(v: &Value) -> Result<BraidingMatrix> {
        let schema = |msg: &str| Error::Parse {
            context: "matrix JSON".into(),
            line: 0,
            column: 0,
            message: msg.into(),
        };
        let obj: &Map<String, Value> = v.as_object().ok_or_else(|| schema("expected an object"))?;
        for k in obj.keys() {
            if !["cyclotomic_order", "theta", "entries"].contains(&k.as_str()) {
                return Err(schema(&format!("unknown field `{k}`")));
            }
        }
        let m = obj
            .get("cyclotomic_order")
            .and_then(Value::as_u64)
            .ok_or_else(|| schema("`cyclotomic_order` must be a positive integer"))?;
        if m == 0 || m > MAX_JSON_ORDER {
            return Err(schema(&format!(
                "`cyclotomic_order` must lie in 1..={MAX_JSON_ORDER}"
            )));
        }
        let m = m as u32;
        let theta = obj
            .get("theta")
            .and_then(Value::as_u64)
            .ok_or_else(|| schema("`theta` must be a positive integer"))?;
        if theta == 0 || theta > MAX_JSON_RANK {
            return Err(schema(&format!("`theta` must lie in 1..={MAX_JSON_RANK}")));
        }
        let theta = theta as usize;
        let rows = obj
            .get("entries")
            .and_then(Value::as_array)
            .ok_or_else(|| schema("`entries` must be an array of rows"))?;
        if rows.len() != theta {
            return Err(schema("`entries` must have `theta` rows"));
        }
        let mut out = vec![];
        for (i, row) in rows.iter().enumerate() {
            let row = row
                .as_array()
                .filter(|r| r.len() == theta)
                .ok_or_else(|| schema(&format!("row {} must have `theta` entries", i + 1)))?;
            let mut r = vec![];
            for (j, e) in row.iter().enumerate() {
                let ctx = format!("entries[{}][{}]", i + 1, j + 1);
                let s = match e {
                    Value::String(s) => parse_entry(s, m, &ctx)?,
                    Value::Number(n) => match n.as_i64() {
                        Some(k) => Scalar::from_int(k),
                        None => return Err(schema(&format!("{ctx} must be an integer or a string"))),
                    },
                    _ => return Err(schema(&format!("{ctx} must be an integer or a string"))),
                };
                r.push(s);
            }
            out.push(r);
        }
        BraidingMatrix::new(out)
    }
}

/// Largest cyclotomic order accepted from a file.
pub const MAX_JSON_ORDER: u64 = 1000;
/// Largest rank accepted from a file.
pub const MAX_JSON_RANK: u64 = 16;

fn parse_entry(s: &str, m: u32, ctx: &str) -> Result<Scalar> {
    if let Ok(v) = parse_literal(s, m) {
        return Ok(v);
    }
    parse_scalar(s, m, 'z').map_err(|e| match e {
        Error::Parse {
            line,
            column,
            message,
            ..
        } => Error::Parse {
            context: ctx.to_string(),
            line,
            column,
            message,
        },
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u32, k: i64) -> Scalar {
        Scalar::root_of_unity(n, k)
    }

    #[test]
    fn qtilde_examples() {
        let q = Scalar::q();
        let m = BraidingMatrix::new(vec![
            vec![z(3, 1), q.clone()],
            vec![q.inv().unwrap(), z(5, 1)],
        ])
        .unwrap();
        assert!(m.qtilde(0, 1).unwrap().is_one());
        let m = BraidingMatrix::new(vec![vec![-Scalar::one(), z(3, 1)], vec![Scalar::one(), q.clone()]]).unwrap();
        assert_eq!(m.qtilde(0, 1).unwrap(), z(3, 1));
        let m = BraidingMatrix::new(vec![vec![-Scalar::one(), z(8, 1)], vec![z(8, 1), q.clone()]]).unwrap();
        assert_eq!(m.qtilde(1, 0).unwrap(), z(4, 1));
        assert_eq!(m.qtilde(1, 1), Err(Error::EqualIndices(1)));
        assert!(matches!(m.qtilde(0, 2), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn construction_checks() {
        assert_eq!(
            BraidingMatrix::new(vec![vec![Scalar::one()]]),
            Err(Error::TrivialDiagonal(1))
        );
        assert!(matches!(
            BraidingMatrix::new(vec![vec![z(3, 1), Scalar::zero()], vec![Scalar::one(), z(3, 1)]]),
            Err(Error::InvalidMatrix(_))
        ));
        assert!(BraidingMatrix::new(vec![vec![z(3, 1), Scalar::one()]]).is_err());
    }

    #[test]
    fn diagrams_and_components() {
        let q = Scalar::q();
        let m = BraidingMatrix::rank2(-Scalar::one(), q.inv().unwrap(), q.clone()).unwrap();
        let d = m.diagram();
        assert_eq!(d.edges.len(), 1);
        assert_eq!(d.edge_label(1, 0), Some(&q.inv().unwrap()));
        assert!(d.is_connected());
        let m = BraidingMatrix::rank2(z(3, 1), Scalar::one(), z(3, 1)).unwrap();
        assert_eq!(m.components(), vec![vec![0], vec![1]]);
        // Chain 1 - 2 - 3 with q̃_13 = 1.
        let m = BraidingMatrix::new(vec![
            vec![z(3, 1), z(3, 2), Scalar::one()],
            vec![Scalar::one(), z(3, 1), z(3, 2)],
            vec![Scalar::one(), Scalar::one(), z(3, 1)],
        ])
        .unwrap();
        let d = m.diagram();
        assert_eq!(d.edges.len(), 2);
        assert!(d.edge_label(0, 2).is_none());
        assert_eq!(m.components(), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn trichotomy() {
        let q = Scalar::q();
        let t = BraidingMatrix::rank2(z(3, 1), z(3, 2), z(4, 1)).unwrap();
        assert_eq!(t.classify_class(), BraidingClass::Torsion);
        let g = BraidingMatrix::rank2(q.clone(), q.inv().unwrap(), q.clone()).unwrap();
        assert_eq!(g.classify_class(), BraidingClass::Generic);
        let s = BraidingMatrix::rank2(-Scalar::one(), q.inv().unwrap(), q.clone()).unwrap();
        assert_eq!(s.classify_class(), BraidingClass::Semigeneric);
        // Torsion vertices joined by a transcendental edge.
        let s = BraidingMatrix::rank2(z(3, 1), q.clone(), z(3, 1)).unwrap();
        assert_eq!(s.classify_class(), BraidingClass::Semigeneric);
    }

    #[test]
    fn json_roundtrip() {
        let text = r#"{"cyclotomic_order": 12, "theta": 2,
                       "entries": [["z^4", "-z*q"], [1, "(1+q)/(2-q)"]]}"#;
        let m = BraidingMatrix::from_json_str(text).unwrap();
        assert_eq!(m.get(0, 0), &z(3, 1));
        let back = BraidingMatrix::from_json(&m.to_json()).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn json_errors_are_parse_errors() {
        for bad in [
            "{",
            r#"{"cyclotomic_order": 0, "theta": 1, "entries": [["z"]]}"#,
            r#"{"cyclotomic_order": 3, "theta": 2, "entries": [["z"]]}"#,
            r#"{"cyclotomic_order": 3, "theta": 1, "entries": [["z^"]]}"#,
            r#"{"cyclotomic_order": 3, "theta": 1, "entries": [[true]]}"#,
            r#"{"cyclotomic_order": 3, "theta": 1, "entries": [["z"]], "extra": 1}"#,
        ] {
            let e = BraidingMatrix::from_json_str(bad).unwrap_err();
            assert!(matches!(e, Error::Parse { .. }), "{bad}: {e:?}");
        }
    }
}
