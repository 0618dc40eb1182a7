use crate::cnf::{CnfFormula, Lit};

/// Unary counter over a list of input literals. `outputs[j - 1]` stands for
/// "at least j inputs are true", for j up to the cap.
#[derive(Clone, Debug)]
pub struct Totalizer {
    pub outputs: Vec<Lit>,
}

impl Totalizer {
    /// Build the counter in `f`. `upward` adds "at least j inputs => output j";
    /// `downward` adds "output j => at least j inputs". Outputs beyond `cap`
    /// are not created; output `cap` then also covers larger counts.
    pub fn build(f: &mut CnfFormula, inputs: &[Lit], cap: usize, upward: bool, downward: bool) -> Totalizer {
        let cap = cap.min(inputs.len());
        if cap == 0 {
            return Totalizer { outputs: vec![] };
        }
        Totalizer { outputs: node(f, inputs, cap, upward, downward) }
    }

    /// Literal for "at most k inputs" (None when trivially true).
    pub fn at_most(&self, k: usize) -> Option<Lit> {
        self.outputs.get(k).map(|&o| !o)
    }

    /// Literal for "at least k inputs" (None when k = 0, trivially true).
    pub fn at_least(&self, k: usize) -> Option<Lit> {
        if k == 0 {
            None
        } else {
            self.outputs.get(k - 1).copied()
        }
    }
}

fn node(f: &mut CnfFormula, inputs: &[Lit], cap: usize, up: bool, down: bool) -> Vec<Lit> {
    if inputs.len() == 1 {
        return vec![inputs[0]];
    }
    let mid = inputs.len() / 2;
    let a = node(f, &inputs[..mid], cap.min(mid), up, down);
    let b = node(f, &inputs[mid..], cap.min(inputs.len() - mid), up, down);
    let width = cap.min(inputs.len());
    let out: Vec<Lit> = (0..width).map(|_| Lit::pos(f.fresh())).collect();
    if up {
        for i in 0..=a.len() {
            for k in 0..=b.len() {
                if i + k == 0 {
                    continue;
                }
                let j = (i + k).min(width);
                let mut c = vec![out[j - 1]];
                if i > 0 {
                    c.push(!a[i - 1]);
                }
                if k > 0 {
                    c.push(!b[k - 1]);
                }
                f.add_clause(c);
            }
        }
    }
    if down {
        for j in 1..=width {
            // out_j needs a_{i+1} or b_{j-i} for every split i + (j-1-i).
            for i in 0..j {
                let k = j - 1 - i;
                let mut c = vec![!out[j - 1]];
                if let Some(&x) = a.get(i) {
                    c.push(x);
                }
                if let Some(&y) = b.get(k) {
                    c.push(y);
                }
                f.add_clause(c);
            }
        }
    }
    out
}
