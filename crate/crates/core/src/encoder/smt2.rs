use std::fmt::Write;

use num_bigint::BigInt;
use num_traits::Signed;

use super::grid::{build_linear, AbscissaGrid, Relation};
use crate::cnf::{Lit, SemVar};
use crate::error::Result;
use crate::spec::ProblemSpec;

fn int(k: &BigInt) -> String {
    if k.is_negative() {
        format!("(- {})", -k)
    } else {
        k.to_string()
    }
}

fn bool_name(name: Option<&SemVar>, var: u32) -> String {
    match name {
        Some(SemVar::Orient(a, b, c)) => format!("l_{a}_{b}_{c}"),
        Some(SemVar::Color { color, point }) => format!("c_{color}_{point}"),
        _ => format!("v{var}"),
    }
}

/// SMT-LIB v2 script (QF_LIA) for realizing `spec` on `grid`: integer
/// abscissae and ordinates, Boolean orientation and color constants, the CNF
/// as assertions and the orientation-guarded linear constraints.
pub fn emit_smt2(spec: &ProblemSpec, grid: &AbscissaGrid) -> Result<String> {
    let h = build_linear(spec, grid)?;
    let f = &h.encoding.formula;
    let names: Vec<String> = (0..=f.var_count).map(|v| bool_name(f.registry.name(v), v)).collect();
    let lit = |l: Lit| {
        let n = &names[l.var() as usize];
        if l.is_positive() {
            n.clone()
        } else {
            format!("(not {n})")
        }
    };
    let mut out = String::new();
    let _ = writeln!(out, "(set-logic QF_LIA)");
    for i in 0..spec.n {
        let _ = writeln!(out, "(declare-const x{i} Int)");
        let _ = writeln!(out, "(declare-const y{i} Int)");
    }
    for name in &names[1..] {
        let _ = writeln!(out, "(declare-const {name} Bool)");
    }
    for (i, x) in grid.xs.iter().enumerate() {
        let _ = writeln!(out, "(assert (= x{i} {}))", int(x));
    }
    for c in &f.clauses {
        match c.as_slice() {
            [l] => {
                let _ = writeln!(out, "(assert {})", lit(*l));
            }
            _ => {
                let body: Vec<String> = c.iter().map(|&l| lit(l)).collect();
                let _ = writeln!(out, "(assert (or {}))", body.join(" "));
            }
        }
    }
    for link in &h.links {
        let terms: Vec<String> =
            link.vars.iter().zip(&link.coeffs).map(|(v, k)| format!("(* {} y{v})", int(k))).collect();
        let sum = format!("(+ {})", terms.join(" "));
        let rel = match link.relation {
            Relation::AtLeastOne => format!("(>= {sum} 1)"),
            Relation::AtMostMinusOne => format!("(<= {sum} (- 1))"),
        };
        let _ = writeln!(out, "(assert (=> {} {rel}))", lit(link.guard));
    }
    let _ = writeln!(out, "(check-sat)");
    let mut all: Vec<String> = (0..spec.n).flat_map(|i| [format!("x{i}"), format!("y{i}")]).collect();
    all.extend(names[1..].iter().cloned());
    let _ = writeln!(out, "(get-value ({}))", all.join(" "));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn script_shape() {
        let spec = ProblemSpec::points(3, vec![]);
        let s = emit_smt2(&spec, &AbscissaGrid::new(3, 1).unwrap()).unwrap();
        assert!(s.starts_with("(set-logic QF_LIA)\n"));
        assert!(s.contains("(declare-const l_0_1_2 Bool)"));
        assert!(s.contains("(assert (=> l_0_1_2 (>= (+ (* 1 y0) (* (- 2) y1) (* 1 y2)) 1)))"));
        assert!(s.contains("(check-sat)\n(get-value (x0 y0 x1 y1 x2 y2 l_0_1_2))"));
        let open = s.matches('(').count();
        assert_eq!(open, s.matches(')').count());
    }
}
