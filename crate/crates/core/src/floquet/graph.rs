//! Periodic cell graphs and their JSON description.
//!
//! Edge `e` yields the directed bonds `2e` (from `from` to `to`) and `2e + 1`
//! (reversed). The edge ends at a vertex take slots in edge order, the `from`
//! end of an edge before its `to` end; slot order is the row and column order
//! of the vertex scattering matrix.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::coupling::{delta_coupling, CMatrix, VertexCoupling};
use crate::diophantine::parse_rational;
use crate::error::{Error, Result};

/// Largest supported periodicity dimension.
pub const MAX_NU: usize = 3;

#[derive(Debug, Clone, PartialEq)]
pub struct Vertex {
    pub id: String,
    pub coupling: VertexCoupling,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub id: String,
    pub from: usize,
    pub to: usize,
    pub length: f64,
    /// Present when the length was given as an exact rational.
    pub exact_length: Option<BigRational>,
    /// Bloch phase exponents: the forward bond picks up `exp(i theta . z)`.
    pub z: Vec<i64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct BondEnd {
    pub vertex: usize,
    pub slot: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicCellGraph {
    nu: usize,
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    /// Per directed bond: where it starts and where it ends.
    departs: Vec<BondEnd>,
    arrives: Vec<BondEnd>,
}

impl PeriodicCellGraph {
    pub fn new(nu: usize, vertices: Vec<Vertex>, edges: Vec<Edge>) -> Result<Self> {
        if nu == 0 || nu > MAX_NU {
            return Err(Error::schema("nu", format!("must be between 1 and {MAX_NU}, got {nu}")));
        }
        if edges.is_empty() {
            return Err(Error::schema("edges", "the cell needs at least one edge"));
        }
        let mut next_slot = vec![0usize; vertices.len()];
        let mut departs = Vec::with_capacity(2 * edges.len());
        let mut arrives = Vec::with_capacity(2 * edges.len());
        for (i, e) in edges.iter().enumerate() {
            let field = |name: &str| format!("edges[{i}].{name}");
            if e.from >= vertices.len() {
                return Err(Error::schema(field("from"), "unknown vertex"));
            }
            if e.to >= vertices.len() {
                return Err(Error::schema(field("to"), "unknown vertex"));
            }
            if !(e.length.is_finite() && e.length > 0.0) {
                return Err(Error::schema(field("length"), format!("must be positive, got {}", e.length)));
            }
            if e.z.len() != nu {
                return Err(Error::schema(field("z"), format!("must have {nu} entries, got {}", e.z.len())));
            }
            let tail = BondEnd { vertex: e.from, slot: next_slot[e.from] };
            next_slot[e.from] += 1;
            let head = BondEnd { vertex: e.to, slot: next_slot[e.to] };
            next_slot[e.to] += 1;
            departs.extend([tail, head]);
            arrives.extend([head, tail]);
        }
        for (i, v) in vertices.iter().enumerate() {
            if v.coupling.degree() != next_slot[i] {
                return Err(Error::schema(
                    format!("vertices[{i}].coupling"),
                    format!(
                        "coupling degree {} does not match the {} edge ends at vertex `{}`",
                        v.coupling.degree(),
                        next_slot[i],
                        v.id
                    ),
                ));
            }
        }
        Ok(Self { nu, vertices, edges, departs, arrives })
    }

    pub fn nu(&self) -> usize {
        self.nu
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn bond_count(&self) -> usize {
        2 * self.edges.len()
    }

    pub(crate) fn departs(&self, bond: usize) -> BondEnd {
        self.departs[bond]
    }

    pub(crate) fn arrives(&self, bond: usize) -> BondEnd {
        self.arrives[bond]
    }

    /// One vertex of degree 4 with a delta coupling and two loops of lengths
    /// `a` and `b` along the two lattice directions.
    pub fn rectangular_lattice(a: f64, b: f64, alpha: f64) -> Result<Self> {
        Self::new(
            2,
            vec![Vertex { id: "v".into(), coupling: delta_coupling(4, alpha)? }],
            vec![
                Edge { id: "a".into(), from: 0, to: 0, length: a, exact_length: exact_of(a), z: vec![1, 0] },
                Edge { id: "b".into(), from: 0, to: 0, length: b, exact_length: exact_of(b), z: vec![0, 1] },
            ],
        )
    }

    /// Parses and validates a graph document.
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let doc: GraphDocument = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            Error::schema(if path == "." { "document".to_string() } else { path }, e.inner().to_string())
        })?;
        doc.into_graph()
    }
}

/// Integers given as floats are kept exact; other floats are not.
fn exact_of(x: f64) -> Option<BigRational> {
    if x.fract() == 0.0 && x.abs() < 1e15 {
        Some(BigRational::from_integer(BigInt::from(x as i64)))
    } else {
        None
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDocument {
    pub nu: usize,
    pub vertices: Vec<VertexDocument>,
    pub edges: Vec<EdgeDocument>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexDocument {
    pub id: String,
    pub coupling: CouplingDocument,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum CouplingDocument {
    Delta {
        alpha: f64,
    },
    St {
        r: usize,
        #[serde(rename = "S")]
        s: Vec<Vec<[f64; 2]>>,
        #[serde(rename = "T")]
        t: Vec<Vec<[f64; 2]>>,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LengthDocument {
    Number(f64),
    Text(String),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeDocument {
    pub id: String,
    pub from: String,
    pub to: String,
    pub length: LengthDocument,
    pub z: Vec<i64>,
}

fn matrix(rows: &[Vec<[f64; 2]>], nrows: usize, ncols: usize, field: &str) -> Result<CMatrix> {
    if rows.len() != nrows {
        return Err(Error::schema(field, format!("expected {nrows} rows, got {}", rows.len())));
    }
    let mut m = CMatrix::zeros(nrows, ncols);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != ncols {
            return Err(Error::schema(format!("{field}[{i}]"), format!("expected {ncols} entries, got {}", row.len())));
        }
        for (j, [re, im]) in row.iter().enumerate() {
            if !(re.is_finite() && im.is_finite()) {
                return Err(Error::schema(format!("{field}[{i}][{j}]"), "entries must be finite"));
            }
            m[(i, j)] = Complex64::new(*re, *im);
        }
    }
    Ok(m)
}

impl GraphDocument {
    pub fn into_graph(self) -> Result<PeriodicCellGraph> {
        let mut index: HashMap<&str, usize> = HashMap::new();
        for (i, v) in self.vertices.iter().enumerate() {
            if index.insert(v.id.as_str(), i).is_some() {
                return Err(Error::schema(format!("vertices[{i}].id"), format!("duplicate vertex id `{}`", v.id)));
            }
        }
        let mut degree = vec![0usize; self.vertices.len()];
        let mut edges = Vec::with_capacity(self.edges.len());
        let mut edge_ids: HashMap<&str, usize> = HashMap::new();
        for (i, e) in self.edges.iter().enumerate() {
            if edge_ids.insert(e.id.as_str(), i).is_some() {
                return Err(Error::schema(format!("edges[{i}].id"), format!("duplicate edge id `{}`", e.id)));
            }
            let lookup = |name: &str, id: &str| {
                index
                    .get(id)
                    .copied()
                    .ok_or_else(|| Error::schema(format!("edges[{i}].{name}"), format!("unknown vertex `{id}`")))
            };
            let from = lookup("from", &e.from)?;
            let to = lookup("to", &e.to)?;
            degree[from] += 1;
            degree[to] += 1;
            let (length, exact_length) = match &e.length {
                LengthDocument::Number(x) => (*x, exact_of(*x)),
                LengthDocument::Text(s) => {
                    let r = parse_rational(s)
                        .map_err(|err| Error::schema(format!("edges[{i}].length"), err.to_string()))?;
                    if !r.is_positive() {
                        return Err(Error::schema(format!("edges[{i}].length"), format!("must be positive, got {s}")));
                    }
                    (r.to_f64().unwrap_or(f64::NAN), Some(r))
                }
            };
            edges.push(Edge { id: e.id.clone(), from, to, length, exact_length, z: e.z.clone() });
        }
        let mut vertices = Vec::with_capacity(self.vertices.len());
        for (i, v) in self.vertices.into_iter().enumerate() {
            let field = format!("vertices[{i}].coupling");
            let n = degree[i];
            if n == 0 {
                return Err(Error::schema(format!("vertices[{i}]"), format!("vertex `{}` has no edges", v.id)));
            }
            let coupling = match v.coupling {
                CouplingDocument::Delta { alpha } => delta_coupling(n, alpha),
                CouplingDocument::St { r, s, t } => {
                    if r > n {
                        return Err(Error::schema(format!("{field}.r"), format!("exceeds vertex degree {n}")));
                    }
                    let s = matrix(&s, r, r, &format!("{field}.S"))?;
                    let t = matrix(&t, r, n - r, &format!("{field}.T"))?;
                    VertexCoupling::new(n, r, s, t)
                }
            }
            .map_err(|err| Error::schema(field.clone(), err.to_string()))?;
            vertices.push(Vertex { id: v.id, coupling });
        }
        PeriodicCellGraph::new(self.nu, vertices, edges)
    }
}

/// `gcd` of positive rationals: `gcd(numerators * L / denominators) / L`.
pub(crate) fn rational_gcd(values: &[BigRational]) -> Option<BigRational> {
    use num_integer::Integer;
    let lcm = values.iter().fold(BigInt::from(1), |acc, v| acc.lcm(v.denom()));
    let g = values
        .iter()
        .map(|v| (v * BigRational::from_integer(lcm.clone())).to_integer())
        .fold(BigInt::zero(), |acc, n| acc.gcd(&n));
    if g.is_zero() {
        None
    } else {
        Some(BigRational::new(g, lcm))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const LATTICE: &str = r#"{
        "nu": 2,
        "vertices": [{"id": "v", "coupling": {"type": "delta", "alpha": -4.35}}],
        "edges": [
            {"id": "a", "from": "v", "to": "v", "length": "1", "z": [1, 0]},
            {"id": "b", "from": "v", "to": "v", "length": 0.618, "z": [0, 1]}
        ]
    }"#;

    #[test]
    fn parses_a_lattice_cell() {
        let g = PeriodicCellGraph::from_json(LATTICE).unwrap();
        assert_eq!(g.nu(), 2);
        assert_eq!(g.bond_count(), 4);
        assert_eq!(g.edges()[0].exact_length, Some(BigRational::from_integer(1.into())));
        assert_eq!(g.edges()[1].exact_length, None);
        assert_eq!(g.vertices()[0].coupling.degree(), 4);
    }

    #[test]
    fn slot_assignment() {
        let g = PeriodicCellGraph::rectangular_lattice(1.0, 2.0, 1.0).unwrap();
        // Edge a: forward departs slot 0, arrives slot 1; edge b uses slots 2, 3.
        assert_eq!(g.departs(0).slot, 0);
        assert_eq!(g.arrives(0).slot, 1);
        assert_eq!(g.departs(1).slot, 1);
        assert_eq!(g.arrives(1).slot, 0);
        assert_eq!(g.departs(2).slot, 2);
        assert_eq!(g.arrives(3).slot, 2);
    }

    #[test]
    fn schema_errors_name_the_field() {
        let cases = [
            (LATTICE.replace("\"nu\": 2", "\"nu\": 0"), "nu"),
            (LATTICE.replace("\"1\"", "\"-1\""), "edges[0].length"),
            (LATTICE.replace("[0, 1]", "[0]"), "edges[1].z"),
            (LATTICE.replace("\"to\": \"v\", \"length\": 0.618", "\"to\": \"w\", \"length\": 0.618"), "edges[1].to"),
            (LATTICE.replace("\"delta\"", "\"robin\""), "vertices[0].coupling"),
            (LATTICE.replace("\"alpha\"", "\"beta\""), "vertices[0].coupling"),
            (LATTICE.replace("0.618", "\"x\""), "edges[1].length"),
        ];
        for (text, field) in cases {
            match PeriodicCellGraph::from_json(&text) {
                Err(Error::Schema { field: f, .. }) => assert!(f.starts_with(field), "{f} vs {field}"),
                other => panic!("expected schema error at {field}, got {other:?}"),
            }
        }
    }

    #[test]
    fn st_coupling_dimensions_are_checked() {
        let doc = r#"{"nu": 1,
            "vertices": [{"id": "v", "coupling": {"type": "st", "r": 1, "S": [[[0, 0]]], "T": [[[1, 0]]]}}],
            "edges": [{"id": "e", "from": "v", "to": "v", "length": "3/2", "z": [1]}]}"#;
        let g = PeriodicCellGraph::from_json(doc).unwrap();
        assert_eq!(g.edges()[0].exact_length, Some(BigRational::new(3.into(), 2.into())));
        let bad = doc.replace(r#""T": [[[1, 0]]]"#, r#""T": [[[1, 0], [1, 0]]]"#);
        assert!(matches!(PeriodicCellGraph::from_json(&bad), Err(Error::Schema { .. })));
    }

    #[test]
    fn gcd_of_rationals() {
        let v = [BigRational::new(2.into(), 1.into()), BigRational::new(3.into(), 1.into())];
        assert_eq!(rational_gcd(&v), Some(BigRational::from_integer(1.into())));
        let w = [BigRational::new(1.into(), 2.into()), BigRational::new(3.into(), 4.into())];
        assert_eq!(rational_gcd(&w), Some(BigRational::new(1.into(), 4.into())));
    }
}
