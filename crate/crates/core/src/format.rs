//! JSON instance files and exact rational scalars.
//!
//! Weights, coordinates and the radius may be written as JSON integers or
//! as strings holding an integer, a fraction `p/q`, or a decimal `1.25`.
//! Floating-point JSON numbers are rejected so every value stays exact.
//! Weights are scaled by `weight_denominator` at parse time and must
//! become nonnegative integers.

use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Geometry, Graph, Instance};
use crate::{Rational, RationalPoint, Weight};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Int(i64),
    Text(String),
}

impl Scalar {
    pub fn to_rational(&self) -> Option<Rational> {
        match self {
            Scalar::Int(i) => Some(Rational::from_integer(*i as i128)),
            Scalar::Text(s) => parse_rational(s),
        }
    }

    pub fn from_rational(q: &Rational) -> Scalar {
        if q.is_integer() {
            if let Some(i) = q.to_integer().to_i64() {
                return Scalar::Int(i);
            }
        }
        Scalar::Text(format_rational(q))
    }
}

/// Parses `"7"`, `"-3/4"`, or `"0.125"`.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let s = text.trim();
    if let Some((num, den)) = s.split_once('/') {
        let num: i128 = num.trim().parse().ok()?;
        let den: i128 = den.trim().parse().ok()?;
        if den == 0 {
            return None;
        }
        return Some(Rational::new(num, den));
    }
    let (negative, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) || frac_part.len() > 30 {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let num: i128 = if digits.is_empty() { 0 } else { digits.parse().ok()? };
    let den: i128 = 10i128.checked_pow(frac_part.len() as u32)?;
    let q = Rational::new(num, den);
    Some(if negative { -q } else { q })
}

/// `"p"` for integers, otherwise the reduced `"p/q"`.
pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.to_integer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeEntry {
    pub id: usize,
    pub weight: Scalar,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<Scalar>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<Scalar>,
}

fn one() -> u64 {
    1
}

fn is_one(v: &u64) -> bool {
    *v == 1
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub version: u32,
    pub k: usize,
    pub m: usize,
    #[serde(default = "one", skip_serializing_if = "is_one")]
    pub weight_denominator: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<Scalar>,
    pub nodes: Vec<NodeEntry>,
    pub edges: Vec<[usize; 2]>,
}

impl InstanceFile {
    pub fn from_instance(inst: &Instance) -> Self {
        let den = inst.weight_denominator();
        let geometry = inst.geometry();
        let nodes = (0..inst.node_count())
            .map(|v| {
                let w = Rational::new(inst.weight(v) as i128, den as i128);
                let point = geometry.map(|g| &g.points[v]);
                NodeEntry {
                    id: v,
                    weight: Scalar::from_rational(&w),
                    x: point.map(|p| Scalar::from_rational(&p.x)),
                    y: point.map(|p| Scalar::from_rational(&p.y)),
                }
            })
            .collect();
        InstanceFile {
            version: SCHEMA_VERSION,
            k: inst.k(),
            m: inst.m(),
            weight_denominator: den,
            radius: geometry.map(|g| Scalar::from_rational(&g.radius)),
            nodes,
            edges: inst.graph().edges().map(|(u, v)| [u, v]).collect(),
        }
    }

    pub fn to_instance(&self) -> Result<Instance> {
        if self.version != SCHEMA_VERSION {
            return Err(Error::param(format!(
                "unsupported schema version {} (expected {SCHEMA_VERSION})",
                self.version
            )));
        }
        if self.weight_denominator == 0 {
            return Err(Error::param("weight_denominator must be positive"));
        }
        let n = self.nodes.len();
        let den = Rational::from_integer(self.weight_denominator as i128);
        let mut weights = Vec::with_capacity(n);
        for (i, node) in self.nodes.iter().enumerate() {
            if node.id != i {
                return Err(Error::param(format!("node entry {i} has id {}; ids must be 0..n-1 in order", node.id)));
            }
            let w = node
                .weight
                .to_rational()
                .ok_or_else(|| Error::param(format!("node {i}: unreadable weight {:?}", node.weight)))?
                * den;
            if !w.is_integer() || w < Rational::zero() {
                return Err(Error::param(format!(
                    "node {i}: weight times denominator {} is not a nonnegative integer",
                    self.weight_denominator
                )));
            }
            let w: Weight = w
                .to_integer()
                .to_u64()
                .ok_or_else(|| Error::param(format!("node {i}: weight out of range")))?;
            weights.push(w);
        }
        let graph = Graph::from_edges(n, self.edges.iter().map(|&[u, v]| (u, v)))?;
        let inst = Instance::new(graph, weights, self.k, self.m)?.with_weight_denominator(self.weight_denominator)?;
        let has_coords = self.nodes.iter().any(|nd| nd.x.is_some() || nd.y.is_some());
        match (&self.radius, has_coords) {
            (None, false) => Ok(inst),
            (Some(radius), true) => {
                let radius = radius
                    .to_rational()
                    .ok_or_else(|| Error::param(format!("unreadable radius {radius:?}")))?;
                let points = self
                    .nodes
                    .iter()
                    .map(|nd| match (&nd.x, &nd.y) {
                        (Some(x), Some(y)) => match (x.to_rational(), y.to_rational()) {
                            (Some(x), Some(y)) => Ok(RationalPoint::new(x, y)),
                            _ => Err(Error::param(format!("node {}: unreadable coordinates", nd.id))),
                        },
                        _ => Err(Error::param(format!("node {}: coordinates must be given for every node", nd.id))),
                    })
                    .collect::<Result<Vec<_>>>()?;
                if radius < Rational::zero() {
                    return Err(Error::param("radius must be nonnegative"));
                }
                inst.with_geometry(Geometry { points, radius })
            }
            (Some(_), false) => Err(Error::param("radius given without coordinates")),
            (None, true) => Err(Error::param("coordinates given without radius")),
        }
    }
}

fn parse_error(e: serde_json::Error) -> Error {
    Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    let file: InstanceFile = serde_json::from_str(text).map_err(parse_error)?;
    file.to_instance()
}

pub fn instance_to_json(inst: &Instance) -> String {
    let mut s = serde_json::to_string_pretty(&InstanceFile::from_instance(inst)).expect("instance file serializes");
    s.push('\n');
    s
}

/// Pretty JSON with a trailing newline, used for every structured output.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("value serializes");
    s.push('\n');
    s
}

/// A node set given either as a JSON array or as an object with a
/// `solution` or `set` array (solver reports and oracle results).
pub fn parse_node_list(text: &str) -> Result<Vec<usize>> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(parse_error)?;
    let list = match &value {
        serde_json::Value::Array(_) => &value,
        serde_json::Value::Object(map) => map
            .get("solution")
            .or_else(|| map.get("set"))
            .ok_or_else(|| Error::param("object has no `solution` or `set` field"))?,
        _ => return Err(Error::param("expected a node list")),
    };
    serde_json::from_value(list.clone()).map_err(|e| Error::param(format!("bad node list: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{gen_gnp, gen_unit_disk, WeightRange};
    use proptest::prelude::*;

    #[test]
    fn rational_forms() {
        assert_eq!(parse_rational("7"), Some(Rational::from_integer(7)));
        assert_eq!(parse_rational("-3/4"), Some(Rational::new(-3, 4)));
        assert_eq!(parse_rational("0.125"), Some(Rational::new(1, 8)));
        assert_eq!(parse_rational(".5"), Some(Rational::new(1, 2)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("abc"), None);
        assert_eq!(parse_rational("."), None);
        assert_eq!(format_rational(&Rational::new(6, 4)), "3/2");
    }

    #[test]
    fn fractional_weights_scale_exactly() {
        let text = r#"{"version":1,"k":1,"m":1,"weight_denominator":4,
            "nodes":[{"id":0,"weight":"1.25"},{"id":1,"weight":"1/2"},{"id":2,"weight":3}],
            "edges":[[0,1],[1,2]]}"#;
        let inst = parse_instance(text).unwrap();
        assert_eq!(inst.weights(), &[5, 2, 12]);
        assert_eq!(parse_instance(&instance_to_json(&inst)).unwrap(), inst);

        let bad = text.replace("\"1/2\"", "\"1/3\"");
        assert!(matches!(parse_instance(&bad), Err(Error::Parameter(_))));
    }

    #[test]
    fn syntax_errors_carry_position() {
        let text = "{\n  \"version\": 1,\n  \"k\": 1 oops\n}";
        match parse_instance(text) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn semantic_errors() {
        let base = r#"{"version":1,"k":1,"m":1,"nodes":[{"id":0,"weight":1},{"id":1,"weight":1}],"edges":[[0,1]]}"#;
        assert!(parse_instance(base).is_ok());
        assert!(parse_instance(&base.replace("[[0,1]]", "[[0,0]]")).is_err());
        assert!(parse_instance(&base.replace("[[0,1]]", "[[0,2]]")).is_err());
        assert!(parse_instance(&base.replace("\"id\":1", "\"id\":5")).is_err());
        assert!(parse_instance(&base.replace("\"m\":1", "\"m\":0")).is_err());
        assert!(parse_instance(&base.replace("\"version\":1", "\"version\":2")).is_err());
        assert!(parse_instance(&base.replace("\"weight\":1}", "\"weight\":-1}")).is_err());
        let geo = r#"{"version":1,"k":1,"m":1,"radius":"1/2","nodes":[{"id":0,"weight":1,"x":0,"y":0},{"id":1,"weight":1,"x":"0.6","y":0}],"edges":[[0,1]]}"#;
        assert!(parse_instance(geo).is_err());
        assert!(parse_instance(&geo.replace("\"0.6\"", "\"0.5\"")).is_ok());
    }

    #[test]
    fn node_lists() {
        assert_eq!(parse_node_list("[3, 1, 2]").unwrap(), vec![3, 1, 2]);
        assert_eq!(parse_node_list(r#"{"set": [0, 4], "weight": 2}"#).unwrap(), vec![0, 4]);
        assert_eq!(parse_node_list(r#"{"solution": [1]}"#).unwrap(), vec![1]);
        assert!(parse_node_list(r#"{"other": [1]}"#).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn generated_instances_round_trip(n in 1usize..25, seed in any::<u64>(), den in 1u64..5, unit in any::<bool>()) {
            let w = WeightRange::new(0, 9).unwrap();
            let inst = if unit {
                gen_unit_disk(n, Rational::new(3, 10), w, 1, 1, seed).unwrap()
            } else {
                gen_gnp(n, 0.3, w, 1, 2, seed).unwrap()
            };
            let inst = inst.with_weight_denominator(den).unwrap();
            let text = instance_to_json(&inst);
            let back = parse_instance(&text).unwrap();
            prop_assert_eq!(&back, &inst);
            prop_assert_eq!(instance_to_json(&back), text);
        }
    }
}
