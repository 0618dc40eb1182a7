use std::io::{Read, Write};
use std::process::{Command, Stdio};
use std::thread;
use std::time::{Duration, Instant};

use super::{check_model, SatResult, Stats, Status};
use crate::cnf::{emit_dimacs, CnfFormula};
use crate::error::{Error, Result};

/// Run an external DIMACS solver. The formula is written to the child's
/// stdin; the answer is read from the `s`/`v` lines of its stdout. Sat models
/// are re-checked against `f` before being accepted.
pub fn external_solve(f: &CnfFormula, command: &[String], timeout: Option<Duration>) -> Result<SatResult> {
    let (program, args) = command.split_first().ok_or_else(|| Error::SolverCrash("empty solver command".into()))?;
    let start = Instant::now();
    let mut child = Command::new(program)
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .spawn()
        .map_err(|e| Error::SolverCrash(format!("cannot start '{program}': {e}")))?;
    let text = emit_dimacs(f);
    let mut stdin = child.stdin.take().expect("piped stdin");
    let writer = thread::spawn(move || {
        // A solver may exit before reading everything; that is not our error.
        let _ = stdin.write_all(text.as_bytes());
    });
    let mut stdout = child.stdout.take().expect("piped stdout");
    let reader = thread::spawn(move || {
        let mut out = String::new();
        let _ = stdout.read_to_string(&mut out);
        out
    });
    let exit = loop {
        if let Some(status) = child.try_wait()? {
            break status;
        }
        if let Some(t) = timeout {
            if start.elapsed() >= t {
                let _ = child.kill();
                let _ = child.wait();
                return Err(Error::ResourceLimit(format!("external solver exceeded {:.1}s", t.as_secs_f64())));
            }
        }
        thread::sleep(Duration::from_millis(5));
    };
    let _ = writer.join();
    let out = reader.join().map_err(|_| Error::SolverCrash("reader thread panicked".into()))?;
    let (status, model) = parse_solver_output(&out, f.var_count).map_err(|e| match e {
        Error::Parse(m) => Error::SolverCrash(format!("{m} (exit status {exit})")),
        other => other,
    })?;
    let stats = Stats { wall_ms: start.elapsed().as_millis() as u64, ..Stats::default() };
    if let Some(m) = &model {
        check_model(f, m)?;
    }
    Ok(SatResult { status, model, stats })
}

/// Parse SAT-competition output: one `s` line and, when satisfiable, `v` lines
/// listing literals and terminated by 0. Unmentioned variables default to false.
pub fn parse_solver_output(out: &str, var_count: u32) -> Result<(Status, Option<Vec<bool>>)> {
    let mut status = None;
    let mut model = vec![false; var_count as usize + 1];
    for line in out.lines() {
        let line = line.trim();
        if let Some(s) = line.strip_prefix("s ") {
            status = Some(match s.trim() {
                "SATISFIABLE" => Status::Sat,
                "UNSATISFIABLE" => Status::Unsat,
                "UNKNOWN" => return Err(Error::ResourceLimit("external solver answered UNKNOWN".into())),
                other => return Err(Error::Parse(format!("unexpected status line 's {other}'"))),
            });
        } else if let Some(vs) = line.strip_prefix("v ") {
            for tok in vs.split_whitespace() {
                let x: i64 = tok.parse().map_err(|_| Error::Parse(format!("bad value literal '{tok}'")))?;
                let v = x.unsigned_abs() as usize;
                if v > var_count as usize {
                    return Err(Error::Parse(format!("value literal {x} exceeds variable count")));
                }
                if x > 0 {
                    model[v] = true;
                }
            }
        }
    }
    match status {
        Some(Status::Sat) => Ok((Status::Sat, Some(model))),
        Some(Status::Unsat) => Ok((Status::Unsat, None)),
        None => Err(Error::Parse("no status line in solver output".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_competition_output() {
        let (s, m) = parse_solver_output("c hi\ns SATISFIABLE\nv -1 2\nv 3 0\n", 3).unwrap();
        assert_eq!(s, Status::Sat);
        assert_eq!(m.unwrap(), vec![false, false, true, true]);
        let (s, m) = parse_solver_output("s UNSATISFIABLE\n", 3).unwrap();
        assert_eq!((s, m), (Status::Unsat, None));
        assert!(parse_solver_output("garbage", 3).is_err());
        assert!(parse_solver_output("s SATISFIABLE\nv 9 0", 3).is_err());
    }
}
