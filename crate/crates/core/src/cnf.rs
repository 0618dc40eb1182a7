//! CNF formulas with a registry of semantic variable names, plus DIMACS I/O.

use std::collections::HashMap;
use std::fmt;
use std::ops::Not;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A literal in DIMACS convention: variable `v >= 1` as `v` or `-v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit(i32);

impl Lit {
    pub fn new(var: u32, positive: bool) -> Self {
        assert!(var >= 1 && var <= i32::MAX as u32);
        Lit(if positive { var as i32 } else { -(var as i32) })
    }

    pub fn pos(var: u32) -> Self {
        Lit::new(var, true)
    }

    pub fn neg(var: u32) -> Self {
        Lit::new(var, false)
    }

    pub fn from_dimacs(x: i32) -> Self {
        assert!(x != 0);
        Lit(x)
    }

    pub fn to_dimacs(self) -> i32 {
        self.0
    }

    pub fn var(self) -> u32 {
        self.0.unsigned_abs()
    }

    pub fn is_positive(self) -> bool {
        self.0 > 0
    }

    /// The literal with the given polarity: `l.with(true) == l`.
    pub fn with(self, positive: bool) -> Self {
        if positive {
            self
        } else {
            !self
        }
    }
}

impl Not for Lit {
    type Output = Lit;
    fn not(self) -> Lit {
        Lit(-self.0)
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The meaning of a registered variable. Indices are 0-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SemVar {
    /// Inverse logic: false means point `point` has color `color`.
    Color { color: usize, point: usize },
    /// Orientation of the triple a < b < c (true = counter-clockwise).
    Orient(usize, usize, usize),
    /// `z` lies outside triangle (a, b, c).
    Ext { tri: (usize, usize, usize), z: usize },
    /// Triangle (a, b, c) has at most `q` interior points.
    Tr { tri: (usize, usize, usize), q: usize },
    /// Inverse logic: false means edge {a, b} has color `color`.
    EdgeColor { color: usize, a: usize, b: usize },
    /// Structure indicator (e.g. an empty convex pentagon on `vertices`).
    Indicator { kind: String, vertices: Vec<usize> },
    /// Named auxiliary variable.
    Aux(String),
}

impl fmt::Display for SemVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        match self {
            SemVar::Color { color, point } => write!(f, "C({color},{point})"),
            SemVar::Orient(a, b, c) => write!(f, "L({a},{b},{c})"),
            SemVar::Ext { tri: (a, b, c), z } => write!(f, "EXT({a},{b},{c};{z})"),
            SemVar::Tr { tri: (a, b, c), q } => write!(f, "TR({a},{b},{c};{q})"),
            SemVar::EdgeColor { color, a, b } => write!(f, "E({color},{a},{b})"),
            SemVar::Indicator { kind, vertices } => write!(f, "IND({kind};{})", join(vertices)),
            SemVar::Aux(name) => write!(f, "AUX({name})"),
        }
    }
}

impl FromStr for SemVar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad variable name '{s}'"));
        let open = s.find('(').ok_or_else(bad)?;
        if !s.ends_with(')') {
            return Err(bad());
        }
        let head = &s[..open];
        let body = &s[open + 1..s.len() - 1];
        let nums = |t: &str| -> Result<Vec<usize>> {
            if t.is_empty() {
                return Ok(vec![]);
            }
            t.split(',').map(|x| x.trim().parse().map_err(|_| bad())).collect()
        };
        let split_semi = |t: &str| -> Result<(String, String)> {
            let (l, r) = t.split_once(';').ok_or_else(bad)?;
            Ok((l.to_string(), r.to_string()))
        };
        let v = match head {
            "C" => match nums(body)?.as_slice() {
                [color, point] => SemVar::Color { color: *color, point: *point },
                _ => return Err(bad()),
            },
            "L" => match nums(body)?.as_slice() {
                [a, b, c] => SemVar::Orient(*a, *b, *c),
                _ => return Err(bad()),
            },
            "E" => match nums(body)?.as_slice() {
                [color, a, b] => SemVar::EdgeColor { color: *color, a: *a, b: *b },
                _ => return Err(bad()),
            },
            "EXT" | "TR" => {
                let (l, r) = split_semi(body)?;
                let tri = match nums(&l)?.as_slice() {
                    [a, b, c] => (*a, *b, *c),
                    _ => return Err(bad()),
                };
                let k = r.trim().parse().map_err(|_| bad())?;
                if head == "EXT" {
                    SemVar::Ext { tri, z: k }
                } else {
                    SemVar::Tr { tri, q: k }
                }
            }
            "IND" => {
                let (l, r) = split_semi(body)?;
                SemVar::Indicator { kind: l, vertices: nums(&r)? }
            }
            "AUX" => SemVar::Aux(body.to_string()),
            _ => return Err(bad()),
        };
        Ok(v)
    }
}

/// Bidirectional map between semantic variables and DIMACS variable numbers.
/// Unregistered variables (anonymous auxiliaries) are allowed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VarRegistry {
    by_var: HashMap<u32, SemVar>,
    by_name: HashMap<SemVar, u32>,
}

impl VarRegistry {
    pub fn get(&self, v: &SemVar) -> Option<u32> {
        self.by_name.get(v).copied()
    }

    pub fn name(&self, var: u32) -> Option<&SemVar> {
        self.by_var.get(&var)
    }

    pub fn len(&self) -> usize {
        self.by_var.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_var.is_empty()
    }

    fn insert(&mut self, var: u32, name: SemVar) -> Result<()> {
        if self.by_var.contains_key(&var) || self.by_name.contains_key(&name) {
            return Err(Error::Parse(format!("variable {var} / {name} registered twice")));
        }
        self.by_var.insert(var, name.clone());
        self.by_name.insert(name, var);
        Ok(())
    }

    /// Registered variables sorted by number.
    pub fn entries(&self) -> Vec<(u32, &SemVar)> {
        let mut v: Vec<(u32, &SemVar)> = self.by_var.iter().map(|(k, n)| (*k, n)).collect();
        v.sort_by_key(|e| e.0);
        v
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CnfFormula {
    pub var_count: u32,
    pub clauses: Vec<Vec<Lit>>,
    pub registry: VarRegistry,
}

impl CnfFormula {
    pub fn new() -> Self {
        CnfFormula::default()
    }

    /// Fresh anonymous variable.
    pub fn fresh(&mut self) -> u32 {
        self.var_count += 1;
        self.var_count
    }

    /// Variable for `name`, allocating and registering it on first use.
    pub fn var(&mut self, name: SemVar) -> u32 {
        if let Some(v) = self.registry.get(&name) {
            return v;
        }
        let v = self.fresh();
        self.registry.insert(v, name).expect("fresh variable");
        v
    }

    pub fn lookup(&self, name: &SemVar) -> Option<u32> {
        self.registry.get(name)
    }

    pub fn add_clause(&mut self, clause: Vec<Lit>) {
        debug_assert!(clause.iter().all(|l| l.var() <= self.var_count));
        self.clauses.push(clause);
    }

    pub fn literal_count(&self) -> usize {
        self.clauses.iter().map(Vec::len).sum()
    }

    /// Whether `model[v]` (index = variable number, entry 0 unused) satisfies every clause.
    pub fn satisfied_by(&self, model: &[bool]) -> bool {
        self.first_falsified(model).is_none()
    }

    pub fn first_falsified(&self, model: &[bool]) -> Option<usize> {
        self.clauses.iter().position(|c| {
            !c.iter().any(|l| {
                let v = l.var() as usize;
                v < model.len() && model[v] == l.is_positive()
            })
        })
    }
}

/// DIMACS text: registry comments, header, one clause per line.
pub fn emit_dimacs(f: &CnfFormula) -> String {
    use std::fmt::Write;
    let mut out = String::with_capacity(f.literal_count() * 6 + 64);
    for (v, name) in f.registry.entries() {
        let _ = writeln!(out, "c var {v} {name}");
    }
    let _ = writeln!(out, "p cnf {} {}", f.var_count, f.clauses.len());
    for c in &f.clauses {
        for l in c {
            let _ = write!(out, "{l} ");
        }
        out.push_str("0\n");
    }
    out
}

pub fn parse_dimacs(text: &str) -> Result<CnfFormula> {
    let mut f = CnfFormula::new();
    let mut header: Option<(u32, usize)> = None;
    let mut current = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        if let Some(rest) = line.strip_prefix('c') {
            let rest = rest.trim();
            if let Some(decl) = rest.strip_prefix("var ") {
                let (id, name) = decl
                    .trim()
                    .split_once(' ')
                    .ok_or_else(|| Error::Parse(format!("line {}: bad var comment", lineno + 1)))?;
                let id: u32 = id.parse().map_err(|_| Error::Parse(format!("line {}: bad var id", lineno + 1)))?;
                f.registry.insert(id, name.trim().parse()?)?;
            }
            continue;
        }
        if let Some(rest) = line.strip_prefix("p ") {
            let parts: Vec<&str> = rest.split_whitespace().collect();
            if parts.len() != 3 || parts[0] != "cnf" {
                return Err(Error::Parse(format!("line {}: bad header", lineno + 1)));
            }
            let vars = parts[1].parse().map_err(|_| Error::Parse("bad variable count".into()))?;
            let clauses = parts[2].parse().map_err(|_| Error::Parse("bad clause count".into()))?;
            header = Some((vars, clauses));
            f.var_count = vars;
            continue;
        }
        if header.is_none() {
            return Err(Error::Parse(format!("line {}: clause before header", lineno + 1)));
        }
        for tok in line.split_whitespace() {
            let x: i64 = tok.parse().map_err(|_| Error::Parse(format!("line {}: bad literal '{tok}'", lineno + 1)))?;
            if x == 0 {
                f.clauses.push(std::mem::take(&mut current));
            } else {
                if x.unsigned_abs() > f.var_count as u64 {
                    return Err(Error::Parse(format!("line {}: literal {x} exceeds header", lineno + 1)));
                }
                current.push(Lit::from_dimacs(x as i32));
            }
        }
    }
    let (_, clauses) = header.ok_or_else(|| Error::Parse("missing 'p cnf' header".into()))?;
    if !current.is_empty() {
        f.clauses.push(current);
    }
    if f.clauses.len() != clauses {
        return Err(Error::Parse(format!("header announces {clauses} clauses, found {}", f.clauses.len())));
    }
    for (v, _) in f.registry.entries() {
        if v > f.var_count {
            return Err(Error::Parse(format!("registered variable {v} exceeds header")));
        }
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn emit_examples() {
        assert_eq!(emit_dimacs(&CnfFormula::new()).trim(), "p cnf 0 0");
        let mut f = CnfFormula::new();
        let (x1, x2) = (f.fresh(), f.fresh());
        f.add_clause(vec![Lit::pos(x1), Lit::neg(x2)]);
        assert_eq!(emit_dimacs(&f).trim(), "p cnf 2 1\n1 -2 0");
    }

    #[test]
    fn names_round_trip() {
        let names = [
            SemVar::Color { color: 1, point: 7 },
            SemVar::Orient(0, 3, 9),
            SemVar::Ext { tri: (1, 4, 8), z: 2 },
            SemVar::Tr { tri: (1, 4, 8), q: 3 },
            SemVar::EdgeColor { color: 0, a: 2, b: 5 },
            SemVar::Indicator { kind: "p5".into(), vertices: vec![0, 1, 2, 3, 4] },
            SemVar::Aux("tot7".into()),
        ];
        for n in names {
            assert_eq!(n.to_string().parse::<SemVar>().unwrap(), n);
        }
        assert!("Q(1)".parse::<SemVar>().is_err());
    }

    #[test]
    fn dimacs_round_trip_with_registry() {
        let mut f = CnfFormula::new();
        let a = f.var(SemVar::Orient(0, 1, 2));
        let b = f.fresh();
        let c = f.var(SemVar::Color { color: 0, point: 1 });
        f.add_clause(vec![Lit::pos(a), Lit::neg(b)]);
        f.add_clause(vec![Lit::neg(c)]);
        f.add_clause(vec![Lit::pos(b), Lit::pos(c), Lit::neg(a)]);
        let text = emit_dimacs(&f);
        assert_eq!(parse_dimacs(&text).unwrap(), f);
    }

    #[test]
    fn parse_errors() {
        assert!(parse_dimacs("").is_err());
        assert!(parse_dimacs("1 2 0").is_err());
        assert!(parse_dimacs("p cnf 1 1\n2 0").is_err());
        assert!(parse_dimacs("p cnf 2 2\n1 2 0").is_err());
        // Clauses may span lines.
        let f = parse_dimacs("p cnf 3 1\n1 2\n-3 0\n").unwrap();
        assert_eq!(f.clauses, vec![vec![Lit::pos(1), Lit::pos(2), Lit::neg(3)]]);
    }
}
