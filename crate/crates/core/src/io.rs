//! JSON point-set files.
//!
//! ```json
//! { "points": [[0, -278, 0], [1, 35, 1], [2, 0]],
//!   "edges": [[0, 1, 0], [0, 2, 1], [1, 2, 1]] }
//! ```
//!
//! Each point is `[x, y]` or `[x, y, color]` with 0-based colors. Coordinates
//! outside the 64-bit range are written as decimal strings. `edges` is
//! optional and, when present, must color every pair exactly once.

use std::path::Path;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::geometry::{Point, PointSet};
use crate::spec::{Coloring, EdgeColoring};

fn int_to_json(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => Value::from(v),
        None => Value::from(x.to_string()),
    }
}

fn int_from_json(v: &Value) -> std::result::Result<BigInt, String> {
    match v {
        Value::Number(n) => n.as_i64().map(BigInt::from).ok_or_else(|| format!("coordinate {n} is not an integer")),
        Value::String(s) => s.trim().parse().map_err(|_| format!("bad integer '{s}'")),
        other => Err(format!("expected an integer, got {other}")),
    }
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut v = vec![int_to_json(&self.x), int_to_json(&self.y)];
        if let Some(c) = self.color {
            v.push(Value::from(c));
        }
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v: Vec<Value> = Vec::deserialize(d)?;
        if !(2..=3).contains(&v.len()) {
            return Err(D::Error::custom("a point is [x, y] or [x, y, color]"));
        }
        let x = int_from_json(&v[0]).map_err(D::Error::custom)?;
        let y = int_from_json(&v[1]).map_err(D::Error::custom)?;
        let color = match v.get(2) {
            None => None,
            Some(c) => {
                Some(c.as_u64().ok_or_else(|| D::Error::custom("color must be a non-negative integer"))? as usize)
            }
        };
        Ok(Point { x, y, color })
    }
}

impl Serialize for PointSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.points.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PointSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(PointSet::new(Vec::deserialize(d)?))
    }
}

impl Serialize for EdgeColoring {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.triples().serialize(s)
    }
}

/// Edge colorings deserialize as a triple list; the point count is taken as
/// one more than the largest endpoint.
impl<'de> Deserialize<'de> for EdgeColoring {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let t: Vec<(usize, usize, usize)> = Vec::deserialize(d)?;
        let n = t.iter().map(|&(a, b, _)| a.max(b) + 1).max().unwrap_or(0);
        EdgeColoring::from_triples(n, &t).map_err(D::Error::custom)
    }
}

/// Contents of a point-set file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointFile {
    pub points: PointSet,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edges: Option<EdgeColoring>,
}

impl PointFile {
    pub fn new(points: PointSet) -> Self {
        PointFile { points, edges: None }
    }

    pub fn parse(text: &str) -> Result<Self> {
        if text.trim().is_empty() {
            return Err(Error::Parse("empty point file".into()));
        }
        let f: PointFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if let Some(ec) = &f.edges {
            if ec.n() != f.points.len() {
                return Err(Error::Parse(format!(
                    "edge coloring covers {} points, file has {}",
                    ec.n(),
                    f.points.len()
                )));
            }
        }
        Ok(f)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// JSON text with one point per line and the edge triples packed a
    /// dozen to a line.
    pub fn to_json(&self) -> String {
        let mut out = String::from("{\n  \"points\": [\n");
        let pts: Vec<String> = self
            .points
            .points
            .iter()
            .map(|p| format!("    {}", serde_json::to_string(p).expect("points serialize")))
            .collect();
        out += &pts.join(",\n");
        out += "\n  ]";
        if let Some(ec) = &self.edges {
            out += ",\n  \"edges\": [\n";
            let rows: Vec<String> = ec
                .triples()
                .chunks(12)
                .map(|c| {
                    let t: Vec<String> = c.iter().map(|(a, b, k)| format!("[{a}, {b}, {k}]")).collect();
                    format!("    {}", t.join(", "))
                })
                .collect();
            out += &rows.join(",\n");
            out += "\n  ]";
        }
        out += "\n}";
        out
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json() + "\n")?;
        Ok(())
    }

    /// Point colors; uncolored files are monochrome.
    pub fn coloring(&self) -> Coloring {
        self.points.coloring().unwrap_or_else(|| Coloring::monochrome(self.points.len()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_with_big_coordinates() {
        let big: BigInt = "123456789012345678901234567890".parse().unwrap();
        let ps = PointSet::new(vec![Point::colored(0, -278, 0), Point::new(big.clone(), 5)]);
        let f = PointFile::new(ps);
        let text = f.to_json();
        assert!(text.contains("\"123456789012345678901234567890\""));
        assert_eq!(PointFile::parse(&text).unwrap(), f);
    }

    #[test]
    fn edges_round_trip() {
        let mut ec = EdgeColoring::new(3, 0);
        ec.set(0, 2, 1);
        let f = PointFile { points: PointSet::from_xy(&[(0, 0), (1, 5), (2, 1)]), edges: Some(ec) };
        assert_eq!(PointFile::parse(&f.to_json()).unwrap(), f);
    }

    #[test]
    fn malformed_files() {
        assert!(matches!(PointFile::parse(""), Err(Error::Parse(_))));
        assert!(matches!(PointFile::parse("{\"points\": [[1]]}"), Err(Error::Parse(_))));
        assert!(matches!(PointFile::parse("{\"points\": [[0,0],[1,1]], \"edges\": [[0,2,0]]}"), Err(Error::Parse(_))));
    }
}
