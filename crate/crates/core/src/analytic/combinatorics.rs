//! Binomial coefficients and the multinomial expansion of powers of
//! `-1/2 sum_l Psi_l exp(-mu_l x)`.

pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, i| acc * i as f64)
}

/// One term of `(sum_l Psi_l e^{-mu_l x})^M` collected by composition `p`:
/// `coef = M!/prod p_l! * prod Psi_l^{p_l}` and `rate = sum_l p_l mu_l`, so the
/// term is `coef * exp(-rate * x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpansionTerm {
    pub coef: f64,
    pub rate: f64,
}

/// All compositions of `total` into `nodes.len()` non-negative parts, as
/// expansion terms over `(Psi_l, mu_l)` pairs.
pub fn multinomial_expansion(nodes: &[(f64, f64)], total: usize) -> Vec<ExpansionTerm> {
    fn rec(nodes: &[(f64, f64)], remaining: usize, coef: f64, rate: f64, out: &mut Vec<ExpansionTerm>) {
        let ((psi, mu), rest) = nodes.split_first().expect("at least one node");
        if rest.is_empty() {
            out.push(ExpansionTerm {
                coef: coef * psi.powi(remaining as i32) / factorial(remaining),
                rate: rate + remaining as f64 * mu,
            });
            return;
        }
        for p in 0..=remaining {
            rec(
                rest,
                remaining - p,
                coef * psi.powi(p as i32) / factorial(p),
                rate + p as f64 * mu,
                out,
            );
        }
    }
    let mut out = Vec::new();
    if nodes.is_empty() {
        if total == 0 {
            out.push(ExpansionTerm { coef: 1.0, rate: 0.0 });
        }
        return out;
    }
    rec(nodes, total, factorial(total), 0.0, &mut out);
    out
}
