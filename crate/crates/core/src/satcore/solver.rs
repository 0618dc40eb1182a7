//! Conflict-driven clause learning with two watched literals, first-UIP
//! learning with recursive minimization, VSIDS with phase saving, restarts
//! and LBD-based clause database reduction. An optional [`Theory`] is
//! consulted after each propagation fixpoint (DPLL(T)).

use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cnf::{CnfFormula, Lit};
use crate::error::{Error, Result};

const TRUE: i8 = 1;
const FALSE: i8 = -1;
const UNDEF: i8 = 0;
const NO_REASON: u32 = u32::MAX;

/// Internal literal: `2 * var + negated`, variables 0-based.
type ILit = u32;

#[inline]
fn ivar(l: ILit) -> usize {
    (l >> 1) as usize
}

#[inline]
fn to_ilit(l: Lit) -> ILit {
    ((l.var() - 1) << 1) | (!l.is_positive()) as u32
}

#[inline]
fn to_lit(l: ILit) -> Lit {
    Lit::new((l >> 1) + 1, l & 1 == 0)
}

/// Decision procedure plugged into the search loop.
pub trait Theory {
    /// Literals appended to the trail since the last call, in trail order.
    fn assert_lits(&mut self, lits: &[Lit]);
    /// Consistency check of everything asserted so far. A returned clause must
    /// consist of literals that are all false under the current assignment.
    /// `complete` is set when every variable is assigned.
    fn check(&mut self, complete: bool) -> Option<Vec<Lit>>;
    /// The trail was cut back to its first `len` literals.
    fn backtrack(&mut self, len: usize);
}

/// The empty theory.
pub struct NoTheory;

impl Theory for NoTheory {
    fn assert_lits(&mut self, _: &[Lit]) {}
    fn check(&mut self, _: bool) -> Option<Vec<Lit>> {
        None
    }
    fn backtrack(&mut self, _: usize) {}
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum RestartPolicy {
    /// Restart after `first * factor^i` conflicts.
    Geometric { first: u64, factor: f64 },
    /// Luby sequence scaled by `unit`.
    Luby { unit: u64 },
}

#[derive(Clone, Debug)]
pub struct SolverConfig {
    pub seed: u64,
    pub max_conflicts: Option<u64>,
    pub max_time: Option<Duration>,
    pub restart: RestartPolicy,
    pub var_decay: f64,
    pub clause_decay: f64,
    /// DIMACS variables that are branched on before all others.
    pub priority_vars: Vec<u32>,
    pub interrupt: Option<Arc<AtomicBool>>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            seed: 0,
            max_conflicts: None,
            max_time: None,
            restart: RestartPolicy::Luby { unit: 100 },
            var_decay: 0.95,
            clause_decay: 0.999,
            priority_vars: Vec::new(),
            interrupt: None,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stats {
    pub conflicts: u64,
    pub decisions: u64,
    pub propagations: u64,
    pub restarts: u64,
    pub theory_conflicts: u64,
    pub wall_ms: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    Sat,
    Unsat,
}

struct Clause {
    lits: Vec<ILit>,
    learnt: bool,
    removed: bool,
    lbd: u32,
    activity: f32,
}

#[derive(Clone, Copy)]
struct Watcher {
    cref: u32,
    blocker: ILit,
}

/// Binary max-heap over variables keyed by (priority, activity).
#[derive(Default)]
struct VarHeap {
    heap: Vec<u32>,
    index: Vec<i32>,
}

impl VarHeap {
    fn grow(&mut self, n: usize) {
        self.index.resize(n, -1);
    }

    fn contains(&self, v: usize) -> bool {
        self.index[v] >= 0
    }

    #[inline]
    fn less(a: u32, b: u32, act: &[f64], prio: &[bool]) -> bool {
        let (a, b) = (a as usize, b as usize);
        (prio[a], act[a]) > (prio[b], act[b])
    }

    fn up(&mut self, mut i: usize, act: &[f64], prio: &[bool]) {
        let v = self.heap[i];
        while i > 0 {
            let p = (i - 1) / 2;
            if !Self::less(v, self.heap[p], act, prio) {
                break;
            }
            self.heap[i] = self.heap[p];
            self.index[self.heap[i] as usize] = i as i32;
            i = p;
        }
        self.heap[i] = v;
        self.index[v as usize] = i as i32;
    }

    fn down(&mut self, mut i: usize, act: &[f64], prio: &[bool]) {
        let v = self.heap[i];
        let n = self.heap.len();
        loop {
            let l = 2 * i + 1;
            if l >= n {
                break;
            }
            let r = l + 1;
            let c = if r < n && Self::less(self.heap[r], self.heap[l], act, prio) { r } else { l };
            if !Self::less(self.heap[c], v, act, prio) {
                break;
            }
            self.heap[i] = self.heap[c];
            self.index[self.heap[i] as usize] = i as i32;
            i = c;
        }
        self.heap[i] = v;
        self.index[v as usize] = i as i32;
    }

    fn insert(&mut self, v: usize, act: &[f64], prio: &[bool]) {
        if self.contains(v) {
            return;
        }
        self.heap.push(v as u32);
        let i = self.heap.len() - 1;
        self.index[v] = i as i32;
        self.up(i, act, prio);
    }

    fn bumped(&mut self, v: usize, act: &[f64], prio: &[bool]) {
        if self.contains(v) {
            self.up(self.index[v] as usize, act, prio);
        }
    }

    fn pop(&mut self, act: &[f64], prio: &[bool]) -> Option<usize> {
        let top = *self.heap.first()?;
        let last = self.heap.pop().unwrap();
        self.index[top as usize] = -1;
        if !self.heap.is_empty() {
            self.heap[0] = last;
            self.index[last as usize] = 0;
            self.down(0, act, prio);
        }
        Some(top as usize)
    }
}

pub struct Solver {
    config: SolverConfig,
    num_vars: usize,
    clauses: Vec<Clause>,
    free_crefs: Vec<u32>,
    learnts: Vec<u32>,
    watches: Vec<Vec<Watcher>>,
    values: Vec<i8>,
    level: Vec<u32>,
    reason: Vec<u32>,
    trail: Vec<ILit>,
    trail_lim: Vec<usize>,
    qhead: usize,
    theory_head: usize,
    activity: Vec<f64>,
    var_inc: f64,
    cla_inc: f32,
    priority: Vec<bool>,
    heap: VarHeap,
    phase: Vec<bool>,
    seen: Vec<u8>,
    analyze_stack: Vec<ILit>,
    analyze_clear: Vec<ILit>,
    lbd_stamp: Vec<u64>,
    lbd_counter: u64,
    ok: bool,
    stats: Stats,
    max_learnts: f64,
    model: Vec<bool>,
    rng: ChaCha8Rng,
}

impl Solver {
    pub fn new(config: SolverConfig) -> Self {
        let rng = ChaCha8Rng::seed_from_u64(config.seed);
        Solver {
            config,
            num_vars: 0,
            clauses: Vec::new(),
            free_crefs: Vec::new(),
            learnts: Vec::new(),
            watches: Vec::new(),
            values: Vec::new(),
            level: Vec::new(),
            reason: Vec::new(),
            trail: Vec::new(),
            trail_lim: Vec::new(),
            qhead: 0,
            theory_head: 0,
            activity: Vec::new(),
            var_inc: 1.0,
            cla_inc: 1.0,
            priority: Vec::new(),
            heap: VarHeap::default(),
            phase: Vec::new(),
            seen: Vec::new(),
            analyze_stack: Vec::new(),
            analyze_clear: Vec::new(),
            lbd_stamp: Vec::new(),
            lbd_counter: 0,
            ok: true,
            stats: Stats::default(),
            max_learnts: 0.0,
            model: Vec::new(),
            rng,
        }
    }

    pub fn from_formula(f: &CnfFormula, config: SolverConfig) -> Self {
        let mut s = Solver::new(config);
        s.reserve_vars(f.var_count);
        for c in &f.clauses {
            if !s.add_clause(c) {
                break;
            }
        }
        s
    }

    pub fn stats(&self) -> Stats {
        self.stats
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    /// Make sure DIMACS variables `1..=n` exist.
    pub fn reserve_vars(&mut self, n: u32) {
        let n = n as usize;
        if n <= self.num_vars {
            return;
        }
        let old = self.num_vars;
        self.num_vars = n;
        self.watches.resize_with(2 * n, Vec::new);
        self.values.resize(2 * n, UNDEF);
        self.level.resize(n, 0);
        self.reason.resize(n, NO_REASON);
        self.phase.resize(n, false);
        self.seen.resize(n, 0);
        self.lbd_stamp.resize(n + 1, 0);
        self.priority.resize(n, false);
        self.heap.grow(n);
        for _ in old..n {
            // Tiny seeded jitter so that ties are broken reproducibly per seed.
            self.activity.push(self.rng.gen::<f64>() * 1e-5);
        }
        for &pv in &self.config.priority_vars {
            let pv = pv as usize;
            if pv >= 1 && pv <= n {
                self.priority[pv - 1] = true;
            }
        }
        for v in old..n {
            self.heap.insert(v, &self.activity, &self.priority);
        }
    }

    #[inline]
    fn value(&self, l: ILit) -> i8 {
        self.values[l as usize]
    }

    fn decision_level(&self) -> usize {
        self.trail_lim.len()
    }

    /// Add a clause at the root. Returns false once the formula is known Unsat.
    pub fn add_clause(&mut self, clause: &[Lit]) -> bool {
        if !self.ok {
            return false;
        }
        assert_eq!(self.decision_level(), 0, "clauses are added at the root");
        if let Some(m) = clause.iter().map(|l| l.var()).max() {
            self.reserve_vars(m);
        }
        let mut lits: Vec<ILit> = clause.iter().map(|&l| to_ilit(l)).collect();
        lits.sort_unstable();
        lits.dedup();
        let mut out = Vec::with_capacity(lits.len());
        for (i, &l) in lits.iter().enumerate() {
            if i + 1 < lits.len() && lits[i + 1] == l ^ 1 {
                return true; // tautology
            }
            match self.value(l) {
                TRUE => return true,
                FALSE => {}
                _ => out.push(l),
            }
        }
        match out.len() {
            0 => {
                self.ok = false;
                false
            }
            1 => {
                self.enqueue(out[0], NO_REASON);
                if self.propagate().is_some() {
                    self.ok = false;
                }
                self.ok
            }
            _ => {
                self.attach(out, false, 0);
                true
            }
        }
    }

    fn attach(&mut self, lits: Vec<ILit>, learnt: bool, lbd: u32) -> u32 {
        debug_assert!(lits.len() >= 2);
        let (w0, w1) = (lits[0], lits[1]);
        let clause = Clause { lits, learnt, removed: false, lbd, activity: 0.0 };
        let cref = match self.free_crefs.pop() {
            Some(c) => {
                self.clauses[c as usize] = clause;
                c
            }
            None => {
                self.clauses.push(clause);
                (self.clauses.len() - 1) as u32
            }
        };
        self.watches[w0 as usize].push(Watcher { cref, blocker: w1 });
        self.watches[w1 as usize].push(Watcher { cref, blocker: w0 });
        if learnt {
            self.learnts.push(cref);
        }
        cref
    }

    #[inline]
    fn enqueue(&mut self, l: ILit, reason: u32) {
        let v = ivar(l);
        self.values[l as usize] = TRUE;
        self.values[(l ^ 1) as usize] = FALSE;
        self.level[v] = self.decision_level() as u32;
        self.reason[v] = reason;
        self.trail.push(l);
    }

    /// Unit propagation; returns a conflicting clause.
    fn propagate(&mut self) -> Option<u32> {
        let mut conflict = None;
        let dl = self.trail_lim.len() as u32;
        let Solver { clauses, watches, values, level, reason, trail, qhead, stats, .. } = self;
        while *qhead < trail.len() {
            let p = trail[*qhead];
            *qhead += 1;
            stats.propagations += 1;
            let false_lit = p ^ 1;
            let mut ws = std::mem::take(&mut watches[false_lit as usize]);
            let (mut i, mut j) = (0, 0);
            let n = ws.len();
            while i < n {
                let w = ws[i];
                i += 1;
                if values[w.blocker as usize] == TRUE {
                    ws[j] = w;
                    j += 1;
                    continue;
                }
                let c = &mut clauses[w.cref as usize];
                if c.removed {
                    continue;
                }
                if c.lits[0] == false_lit {
                    c.lits.swap(0, 1);
                }
                let first = c.lits[0];
                if first != w.blocker && values[first as usize] == TRUE {
                    ws[j] = Watcher { cref: w.cref, blocker: first };
                    j += 1;
                    continue;
                }
                let mut moved = false;
                for k in 2..c.lits.len() {
                    let l = c.lits[k];
                    if values[l as usize] != FALSE {
                        c.lits.swap(1, k);
                        watches[l as usize].push(Watcher { cref: w.cref, blocker: first });
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                ws[j] = Watcher { cref: w.cref, blocker: first };
                j += 1;
                if values[first as usize] == FALSE {
                    conflict = Some(w.cref);
                    while i < n {
                        ws[j] = ws[i];
                        i += 1;
                        j += 1;
                    }
                    *qhead = trail.len();
                } else {
                    let v = ivar(first);
                    values[first as usize] = TRUE;
                    values[(first ^ 1) as usize] = FALSE;
                    level[v] = dl;
                    reason[v] = w.cref;
                    trail.push(first);
                }
            }
            ws.truncate(j);
            watches[false_lit as usize] = ws;
            if conflict.is_some() {
                break;
            }
        }
        conflict
    }

    fn cancel_until(&mut self, lvl: usize, theory: &mut dyn Theory) {
        if self.decision_level() <= lvl {
            return;
        }
        let keep = self.trail_lim[lvl];
        for i in (keep..self.trail.len()).rev() {
            let l = self.trail[i];
            let v = ivar(l);
            self.values[l as usize] = UNDEF;
            self.values[(l ^ 1) as usize] = UNDEF;
            self.reason[v] = NO_REASON;
            self.phase[v] = l & 1 == 0;
            self.heap.insert(v, &self.activity, &self.priority);
        }
        self.trail.truncate(keep);
        self.trail_lim.truncate(lvl);
        self.qhead = keep;
        if self.theory_head > keep {
            self.theory_head = keep;
            theory.backtrack(keep);
        }
    }

    fn bump_var(&mut self, v: usize) {
        self.activity[v] += self.var_inc;
        if self.activity[v] > 1e100 {
            for a in &mut self.activity {
                *a *= 1e-100;
            }
            self.var_inc *= 1e-100;
        }
        self.heap.bumped(v, &self.activity, &self.priority);
    }

    fn bump_clause(&mut self, cref: u32) {
        let c = &mut self.clauses[cref as usize];
        c.activity += self.cla_inc;
        if c.activity > 1e20 {
            for &l in &self.learnts {
                self.clauses[l as usize].activity *= 1e-20;
            }
            self.cla_inc *= 1e-20;
        }
    }

    fn abstract_level(&self, v: usize) -> u32 {
        1 << (self.level[v] & 31)
    }

    /// First-UIP analysis. `conflict` lists the literals of a falsified clause.
    /// Returns the learnt clause (asserting literal first) and the backjump level.
    fn analyze(&mut self, conflict: &[ILit], conflict_cref: Option<u32>) -> (Vec<ILit>, usize) {
        let dl = self.decision_level() as u32;
        let mut learnt: Vec<ILit> = vec![0];
        let mut path = 0;
        let mut index = self.trail.len();
        let mut uip: ILit;
        let mut cref = conflict_cref;
        let mut first = true;
        loop {
            let len = if first { conflict.len() } else { self.clauses[cref.unwrap() as usize].lits.len() };
            if let Some(c) = cref {
                if self.clauses[c as usize].learnt {
                    self.bump_clause(c);
                }
            }
            let start = if first { 0 } else { 1 };
            for k in start..len {
                let q = if first { conflict[k] } else { self.clauses[cref.unwrap() as usize].lits[k] };
                let v = ivar(q);
                if self.seen[v] == 0 && self.level[v] > 0 {
                    self.seen[v] = 1;
                    self.bump_var(v);
                    if self.level[v] >= dl {
                        path += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            first = false;
            loop {
                index -= 1;
                if self.seen[ivar(self.trail[index])] != 0 {
                    break;
                }
            }
            let pl = self.trail[index];
            uip = pl;
            cref = Some(self.reason[ivar(pl)]).filter(|&r| r != NO_REASON);
            self.seen[ivar(pl)] = 0;
            path -= 1;
            if path == 0 {
                break;
            }
            debug_assert!(cref.is_some(), "non-UIP literal without reason");
        }
        learnt[0] = uip ^ 1;

        // Recursive minimization.
        self.analyze_clear.clear();
        self.analyze_clear.extend_from_slice(&learnt);
        let abs_levels = learnt[1..].iter().fold(0u32, |acc, &l| acc | self.abstract_level(ivar(l)));
        let mut kept = 1;
        for i in 1..learnt.len() {
            let l = learnt[i];
            if self.reason[ivar(l)] == NO_REASON || !self.lit_redundant(l, abs_levels) {
                learnt[kept] = l;
                kept += 1;
            }
        }
        learnt.truncate(kept);
        for &l in &self.analyze_clear {
            self.seen[ivar(l)] = 0;
        }

        // Backjump level: put the highest-level remaining literal second.
        let bt = if learnt.len() == 1 {
            0
        } else {
            let mut max_i = 1;
            for i in 2..learnt.len() {
                if self.level[ivar(learnt[i])] > self.level[ivar(learnt[max_i])] {
                    max_i = i;
                }
            }
            learnt.swap(1, max_i);
            self.level[ivar(learnt[1])] as usize
        };
        (learnt, bt)
    }

    fn lit_redundant(&mut self, p: ILit, abs_levels: u32) -> bool {
        self.analyze_stack.clear();
        self.analyze_stack.push(p);
        let top = self.analyze_clear.len();
        while let Some(q) = self.analyze_stack.pop() {
            let r = self.reason[ivar(q)];
            debug_assert!(r != NO_REASON);
            let len = self.clauses[r as usize].lits.len();
            for k in 1..len {
                let l = self.clauses[r as usize].lits[k];
                let v = ivar(l);
                if self.seen[v] == 0 && self.level[v] > 0 {
                    if self.reason[v] != NO_REASON && (self.abstract_level(v) & abs_levels) != 0 {
                        self.seen[v] = 1;
                        self.analyze_stack.push(l);
                        self.analyze_clear.push(l);
                    } else {
                        for &c in &self.analyze_clear[top..] {
                            self.seen[ivar(c)] = 0;
                        }
                        self.analyze_clear.truncate(top);
                        return false;
                    }
                }
            }
        }
        true
    }

    fn compute_lbd(&mut self, lits: &[ILit]) -> u32 {
        self.lbd_counter += 1;
        let stamp = self.lbd_counter;
        let mut n = 0;
        for &l in lits {
            let lv = self.level[ivar(l)] as usize;
            if self.lbd_stamp[lv] != stamp {
                self.lbd_stamp[lv] = stamp;
                n += 1;
            }
        }
        n
    }

    fn reduce_db(&mut self) {
        let mut cands: Vec<u32> = Vec::with_capacity(self.learnts.len());
        let mut keep: Vec<u32> = Vec::new();
        for &cr in &self.learnts {
            let c = &self.clauses[cr as usize];
            let locked = {
                let l0 = c.lits[0];
                self.values[l0 as usize] == TRUE && self.reason[ivar(l0)] == cr
            };
            if c.lbd <= 2 || c.lits.len() == 2 || locked {
                keep.push(cr);
            } else {
                cands.push(cr);
            }
        }
        cands.sort_by(|&a, &b| {
            let (ca, cb) = (&self.clauses[a as usize], &self.clauses[b as usize]);
            cb.lbd.cmp(&ca.lbd).then(ca.activity.partial_cmp(&cb.activity).unwrap())
        });
        let remove = cands.len() / 2;
        for &cr in &cands[..remove] {
            let c = &mut self.clauses[cr as usize];
            c.removed = true;
            c.lits = Vec::new();
        }
        keep.extend_from_slice(&cands[remove..]);
        self.learnts = keep;
        let clauses = &self.clauses;
        for ws in &mut self.watches {
            ws.retain(|w| !clauses[w.cref as usize].removed);
        }
        for &cr in &cands[..remove] {
            self.free_crefs.push(cr);
        }
    }

    fn pick_branch(&mut self) -> Option<ILit> {
        loop {
            let v = self.heap.pop(&self.activity, &self.priority)?;
            if self.values[2 * v] == UNDEF {
                return Some(((v as u32) << 1) | (!self.phase[v]) as u32);
            }
        }
    }

    fn feed_theory(&mut self, theory: &mut dyn Theory) {
        if self.theory_head < self.trail.len() {
            let lits: Vec<Lit> = self.trail[self.theory_head..].iter().map(|&l| to_lit(l)).collect();
            theory.assert_lits(&lits);
            self.theory_head = self.trail.len();
        }
    }

    /// Learn from a falsified clause. Returns false if the formula became Unsat.
    fn resolve_conflict(&mut self, lits: &[ILit], cref: Option<u32>, theory: &mut dyn Theory) -> bool {
        self.stats.conflicts += 1;
        if self.decision_level() == 0 {
            return false;
        }
        let (learnt, bt) = self.analyze(lits, cref);
        self.cancel_until(bt, theory);
        if learnt.len() == 1 {
            self.enqueue(learnt[0], NO_REASON);
        } else {
            let lbd = self.compute_lbd(&learnt);
            let l0 = learnt[0];
            let cr = self.attach(learnt, true, lbd);
            self.bump_clause(cr);
            self.enqueue(l0, cr);
        }
        self.var_inc /= self.config.var_decay;
        self.cla_inc /= self.config.clause_decay as f32;
        true
    }

    /// Handle a theory conflict clause. Returns false if the formula became Unsat.
    fn theory_conflict(&mut self, clause: Vec<Lit>, theory: &mut dyn Theory) -> bool {
        self.stats.theory_conflicts += 1;
        let lits: Vec<ILit> = clause.iter().map(|&l| to_ilit(l)).collect();
        debug_assert!(lits.iter().all(|&l| self.value(l) == FALSE), "theory clause not falsified");
        let max = lits.iter().map(|&l| self.level[ivar(l)] as usize).max();
        match max {
            None | Some(0) => {
                self.stats.conflicts += 1;
                false
            }
            Some(m) => {
                self.cancel_until(m, theory);
                self.resolve_conflict(&lits, None, theory)
            }
        }
    }

    fn budget_exceeded(&self, start: Instant, conflicts_at_start: u64) -> Option<String> {
        if let Some(max) = self.config.max_conflicts {
            if self.stats.conflicts - conflicts_at_start >= max {
                return Some(format!("{max} conflicts"));
            }
        }
        if let Some(t) = self.config.max_time {
            if start.elapsed() >= t {
                return Some(format!("{:.1}s wall time", t.as_secs_f64()));
            }
        }
        if let Some(flag) = &self.config.interrupt {
            if flag.load(Ordering::Relaxed) {
                return Some("interrupted".into());
            }
        }
        None
    }

    fn luby(y: f64, mut x: u64) -> f64 {
        let (mut size, mut seq) = (1u64, 0u32);
        while size < x + 1 {
            seq += 1;
            size = 2 * size + 1;
        }
        while size - 1 != x {
            size = (size - 1) >> 1;
            seq -= 1;
            x %= size;
        }
        y.powi(seq as i32)
    }

    pub fn solve(&mut self, assumptions: &[Lit]) -> Result<Status> {
        self.solve_with_theory(assumptions, &mut NoTheory)
    }

    /// Decide satisfiability under `assumptions`. After `Sat`, [`Solver::model`]
    /// holds the assignment. The solver returns to the root level afterwards,
    /// so clauses may be added between calls.
    pub fn solve_with_theory(&mut self, assumptions: &[Lit], theory: &mut dyn Theory) -> Result<Status> {
        let start = Instant::now();
        let conflicts_at_start = self.stats.conflicts;
        self.model.clear();
        if let Some(m) = assumptions.iter().map(|l| l.var()).max() {
            self.reserve_vars(m);
        }
        if !self.ok {
            return Ok(Status::Unsat);
        }
        let assumptions: Vec<ILit> = assumptions.iter().map(|&l| to_ilit(l)).collect();
        if self.max_learnts == 0.0 {
            self.max_learnts = (self.clauses.len() as f64 / 3.0).max(2000.0);
        }
        let mut restart_round = 0u64;
        let result = loop {
            let limit = match self.config.restart {
                RestartPolicy::Luby { unit } => (Self::luby(2.0, restart_round) * unit as f64) as u64,
                RestartPolicy::Geometric { first, factor } => (first as f64 * factor.powi(restart_round as i32)) as u64,
            };
            restart_round += 1;
            match self.search(limit.max(1), &assumptions, theory, start, conflicts_at_start) {
                Ok(Some(status)) => break Ok(status),
                Ok(None) => self.stats.restarts += 1,
                Err(e) => break Err(e),
            }
        };
        self.cancel_until(0, theory);
        self.stats.wall_ms += start.elapsed().as_millis() as u64;
        result
    }

    fn search(
        &mut self,
        conflict_limit: u64,
        assumptions: &[ILit],
        theory: &mut dyn Theory,
        start: Instant,
        conflicts_at_start: u64,
    ) -> Result<Option<Status>> {
        let mut conflicts = 0u64;
        let mut ticks = 0u32;
        loop {
            if let Some(cr) = self.propagate() {
                conflicts += 1;
                let lits = self.clauses[cr as usize].lits.clone();
                if !self.resolve_conflict(&lits, Some(cr), theory) {
                    self.ok = false;
                    return Ok(Some(Status::Unsat));
                }
                if conflicts % 256 == 0 {
                    if let Some(why) = self.budget_exceeded(start, conflicts_at_start) {
                        return Err(Error::ResourceLimit(why));
                    }
                }
                continue;
            }
            self.feed_theory(theory);
            if let Some(clause) = theory.check(false) {
                conflicts += 1;
                if !self.theory_conflict(clause, theory) {
                    self.ok = false;
                    return Ok(Some(Status::Unsat));
                }
                continue;
            }
            ticks = ticks.wrapping_add(1);
            if ticks % 1024 == 0 {
                if let Some(why) = self.budget_exceeded(start, conflicts_at_start) {
                    return Err(Error::ResourceLimit(why));
                }
            }
            if conflicts >= conflict_limit && self.decision_level() > assumptions.len() {
                self.cancel_until(0, theory);
                return Ok(None);
            }
            if self.learnts.len() as f64 - self.trail.len() as f64 >= self.max_learnts {
                self.reduce_db();
                self.max_learnts *= 1.1;
            }
            let mut next = None;
            while self.decision_level() < assumptions.len() {
                let p = assumptions[self.decision_level()];
                match self.value(p) {
                    TRUE => self.trail_lim.push(self.trail.len()),
                    FALSE => return Ok(Some(Status::Unsat)),
                    _ => {
                        next = Some(p);
                        break;
                    }
                }
            }
            let next = match next {
                Some(p) => p,
                None => match self.pick_branch() {
                    Some(p) => p,
                    None => {
                        if let Some(clause) = theory.check(true) {
                            if !self.theory_conflict(clause, theory) {
                                self.ok = false;
                                return Ok(Some(Status::Unsat));
                            }
                            continue;
                        }
                        self.model = (0..=self.num_vars).map(|v| v > 0 && self.values[2 * (v - 1)] == TRUE).collect();
                        return Ok(Some(Status::Sat));
                    }
                },
            };
            self.stats.decisions += 1;
            self.trail_lim.push(self.trail.len());
            self.enqueue(next, NO_REASON);
        }
    }

    /// Assignment of the last `Sat` answer, indexed by DIMACS variable (entry 0 unused).
    pub fn model(&self) -> &[bool] {
        &self.model
    }

    /// Whether the clause set is already known to be unsatisfiable.
    pub fn is_ok(&self) -> bool {
        self.ok
    }
}
