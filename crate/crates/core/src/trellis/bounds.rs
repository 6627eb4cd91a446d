//! Complexity bounds for minimal (multi-goal) trellises of `[[n, k]]` codes.

use serde::Serialize;

use super::Trellis;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundCheck {
    pub name: String,
    pub value: f64,
    pub bound: f64,
    pub holds: bool,
    /// The value meets the bound with equality.
    pub tight: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub checks: Vec<BoundCheck>,
}

impl BoundReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn get(&self, name: &str) -> Option<&BoundCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn violations(&self) -> Vec<&BoundCheck> {
        self.checks.iter().filter(|c| !c.holds).collect()
    }

    fn push(&mut self, name: String, value: f64, bound: f64) {
        let tol = 1e-9 * bound.abs().max(1.0);
        self.checks.push(BoundCheck {
            name,
            value,
            bound,
            holds: value <= bound + tol,
            tight: (value - bound).abs() <= tol,
        });
    }
}

fn pow2(e: f64) -> f64 {
    e.exp2()
}

/// Bounds for a trellis of an `[[n, k]]` stabilizer code over the full
/// alphabet: per-depth `|V_t| <= 2^(n+k)` and `|V_t| <= 4^min(t, n+k-t)`,
/// and the totals for `|V|`, `|E|` and `2|E| - |V|`.
pub fn check_bounds(t: &Trellis, n: usize, k: usize) -> BoundReport {
    let mut r = BoundReport { checks: Vec::new() };
    let nk = (n + k) as f64;
    for (d, &size) in t.level_sizes().iter().enumerate() {
        r.push(format!("states[{d}] <= 2^(n+k)"), size as f64, pow2(nk));
        let m = (d as f64).min(nk - d as f64);
        r.push(
            format!("states[{d}] <= 4^min(t,n+k-t)"),
            size as f64,
            pow2(2.0 * m),
        );
    }
    let v = t.num_vertices() as f64;
    let e = t.num_edges() as f64;
    let four_k = pow2(2.0 * k as f64);
    r.push(
        "|V| <= (5*2^(n+k) - 2^(2k) - 1)/3".into(),
        v,
        (5.0 * pow2(nk) - four_k - 1.0) / 3.0,
    );
    r.push(
        "|E| <= 4*(2^(n+k+1) - 2^(2k) - 1)/3".into(),
        e,
        4.0 * (pow2(nk + 1.0) - four_k - 1.0) / 3.0,
    );
    r.push(
        "2|E|-|V| <= (11*2^(n+k) - 7*2^(2k) - 7)/3".into(),
        2.0 * e - v,
        (11.0 * pow2(nk) - 7.0 * four_k - 7.0) / 3.0,
    );
    r
}

/// Bounds for the binary trellises of a CSS code: per-depth
/// `|V_t| <= 2^min(t, n+k-t)` and the totals with `2^((n+k)/2)`.
pub fn check_css_bounds(t: &Trellis, n: usize, k: usize) -> BoundReport {
    let mut r = BoundReport { checks: Vec::new() };
    let nk = (n + k) as f64;
    for (d, &size) in t.level_sizes().iter().enumerate() {
        let m = (d as f64).min(nk - d as f64);
        r.push(
            format!("states[{d}] <= 2^min(t,n+k-t)"),
            size as f64,
            pow2(m),
        );
    }
    let v = t.num_vertices() as f64;
    let e = t.num_edges() as f64;
    let half = pow2(nk / 2.0);
    let two_k = pow2(k as f64);
    r.push(
        "|V| <= 3*2^((n+k)/2) - 2^k - 1".into(),
        v,
        3.0 * half - two_k - 1.0,
    );
    r.push(
        "|E| <= 2*(2^((n+k)/2+1) - 2^k - 1)".into(),
        e,
        2.0 * (2.0 * half - two_k - 1.0),
    );
    r.push(
        "2|E|-|V| <= 5*2^((n+k)/2) - 3*2^k - 3".into(),
        2.0 * e - v,
        5.0 * half - 3.0 * two_k - 3.0,
    );
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_trellis_satisfies_bounds() {
        let t = Trellis::identity(3).unwrap();
        assert!(check_bounds(&t, 3, 0).all_hold());
    }

    #[test]
    fn closed_forms_at_422() {
        let t = Trellis::identity(4).unwrap();
        let r = check_bounds(&t, 4, 2);
        assert_eq!(
            r.get("|V| <= (5*2^(n+k) - 2^(2k) - 1)/3").unwrap().bound,
            101.0
        );
        assert_eq!(
            r.get("|E| <= 4*(2^(n+k+1) - 2^(2k) - 1)/3").unwrap().bound,
            148.0
        );
        let c = check_css_bounds(&t, 4, 2);
        assert_eq!(c.get("|V| <= 3*2^((n+k)/2) - 2^k - 1").unwrap().bound, 19.0);
        assert_eq!(
            c.get("|E| <= 2*(2^((n+k)/2+1) - 2^k - 1)").unwrap().bound,
            22.0
        );
    }
}
