//! Closed-form confidence radii and sample-size formulas used verbatim by
//! the selection algorithms. All logarithms are natural.

use crate::error::{Error, Result};

/// Accuracy and confidence parameters bundled with their domain checks.
///
/// `eta` is the per-call accuracy used by elimination routines; selection
/// entry points derive it internally and only take `epsilon`/`delta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConfidenceParams {
    /// Target additive accuracy, in (0, 1).
    pub epsilon: f64,
    /// Failure probability, in (0, 1).
    pub delta: f64,
    /// Elimination accuracy, in (0, 1].
    pub eta: f64,
}

impl ConfidenceParams {
    /// Validates `epsilon, delta` in (0,1); `eta` defaults to `epsilon`.
    pub fn new(epsilon: f64, delta: f64) -> Result<Self> {
        check_unit_open("epsilon", epsilon)?;
        check_unit_open("delta", delta)?;
        Ok(Self {
            epsilon,
            delta,
            eta: epsilon,
        })
    }

    /// Same with an explicit elimination accuracy in (0, 1].
    pub fn with_eta(epsilon: f64, delta: f64, eta: f64) -> Result<Self> {
        check_unit_open("epsilon", epsilon)?;
        check_unit_open("delta", delta)?;
        if !(eta > 0.0 && eta <= 1.0) {
            return Err(Error::InvalidParam(format!("eta {eta} outside (0, 1]")));
        }
        Ok(Self {
            epsilon,
            delta,
            eta,
        })
    }
}

pub(crate) fn check_unit_open(name: &str, x: f64) -> Result<()> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::InvalidParam(format!("{name} {x} outside (0, 1)")));
    }
    Ok(())
}

/// Accuracy parameters must be positive and finite. Values of 1 and above
/// give vacuous guarantees on [0, 1]-bounded objectives but are accepted:
/// budget sweeps use large accuracies as cheap-run knobs.
pub(crate) fn check_positive_accuracy(name: &str, x: f64) -> Result<()> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::InvalidParam(format!(
            "{name} {x} must be positive and finite"
        )));
    }
    Ok(())
}

/// Natural log of the binomial coefficient `C(m, k)`.
pub fn ln_binomial(m: usize, k: usize) -> Result<f64> {
    if k > m {
        return Err(Error::InvalidParam(format!("k {k} exceeds m {m}")));
    }
    let k = k.min(m - k);
    let mut acc = 0.0;
    for i in 1..=k {
        acc += ((m - k + i) as f64).ln() - (i as f64).ln();
    }
    Ok(acc)
}

/// Anytime Hoeffding radius after `r` accepted rounds with `pool` active
/// arms: `sqrt(ln(4 * pool * r^2 / delta) / (2r))`.
pub fn elim_radius(r: u64, pool: usize, delta: f64) -> Result<f64> {
    if r == 0 || pool == 0 {
        return Err(Error::InvalidParam(
            "elim_radius needs r >= 1 and pool >= 1".into(),
        ));
    }
    check_unit_open("delta", delta)?;
    let r = r as f64;
    Ok(((4.0 * pool as f64 * r * r / delta).ln() / (2.0 * r)).sqrt())
}

/// Anytime radius for rival audits after `n` observations against `rivals`
/// outside candidates. Same shape as [`elim_radius`] with pool = rivals.
pub fn audit_radius(n: u64, rivals: usize, delta: f64) -> Result<f64> {
    elim_radius(n, rivals, delta)
}

/// Task draws for exhaustive binary ERM:
/// `ceil((2 / eps^2) (ln C(m,k) + ln(2/delta)))`.
pub fn erm_binary_t(m: usize, k: usize, epsilon: f64, delta: f64) -> Result<u64> {
    check_committee_domain(m, k)?;
    check_positive_accuracy("epsilon", epsilon)?;
    check_unit_open("delta", delta)?;
    let bound = 2.0 / (epsilon * epsilon) * (ln_binomial(m, k)? + (2.0 / delta).ln());
    Ok(bound.ceil() as u64)
}

/// Task draws for fully elicited empirical greedy:
/// `ceil(((2 - 1/e)^2 / (2 eps^2)) (ln C(m,k) + ln(2/delta)))`.
pub fn greedy_binary_t(m: usize, k: usize, epsilon: f64, delta: f64) -> Result<u64> {
    check_committee_domain(m, k)?;
    check_positive_accuracy("epsilon", epsilon)?;
    check_unit_open("delta", delta)?;
    let c = 2.0 - 1.0 / std::f64::consts::E;
    let bound = c * c / (2.0 * epsilon * epsilon) * (ln_binomial(m, k)? + (2.0 / delta).ln());
    Ok(bound.ceil() as u64)
}

/// Ranking draws for ordinal ERM:
/// `ceil((2 / eps^2) ln(2 (m-k) C(m,k) / delta))`. Requires `k < m`.
pub fn ordinal_erm_t(m: usize, k: usize, epsilon: f64, delta: f64) -> Result<u64> {
    check_committee_domain(m, k)?;
    if k >= m {
        return Err(Error::InvalidParam(
            "ordinal objectives need k < m (a rival must exist)".into(),
        ));
    }
    check_positive_accuracy("epsilon", epsilon)?;
    check_unit_open("delta", delta)?;
    let ln_pairs = (2.0 * (m - k) as f64 / delta).ln() + ln_binomial(m, k)?;
    Ok((2.0 / (epsilon * epsilon) * ln_pairs).ceil() as u64)
}

/// Miss-rate certification parameters `(r0, M0)`:
/// `r0 = ceil(6 ln(4k/delta))`, `M0 = floor(2 r0 k / eps)`.
pub fn certify_params(k: usize, epsilon: f64, delta: f64) -> Result<(u64, u64)> {
    if k == 0 {
        return Err(Error::InvalidParam("k must be >= 1".into()));
    }
    check_positive_accuracy("epsilon", epsilon)?;
    check_unit_open("delta", delta)?;
    let r0 = (6.0 * (4.0 * k as f64 / delta).ln()).ceil() as u64;
    let m0 = (2.0 * r0 as f64 * k as f64 / epsilon).floor() as u64;
    Ok((r0, m0))
}

/// Tentative pairs per greedy step in the weighted ordinal oracle:
/// `ceil(128 k^2 / eps^2 * ln(4k/delta))`.
pub fn wofg_l(k: usize, epsilon: f64, delta: f64) -> Result<u64> {
    if k == 0 {
        return Err(Error::InvalidParam("k must be >= 1".into()));
    }
    check_positive_accuracy("epsilon", epsilon)?;
    check_unit_open("delta", delta)?;
    let l = 128.0 * (k * k) as f64 / (epsilon * epsilon) * (4.0 * k as f64 / delta).ln();
    Ok(l.ceil() as u64)
}

/// Multiplicative-weights round count and learning rate:
/// `R = ceil(c_r ln(m) / eps^2)`, `eta_mw = sqrt(ln(m) / R)`.
pub fn mw_rounds_and_rate(m: usize, epsilon: f64, c_r: f64) -> Result<(u64, f64)> {
    if m < 2 {
        return Err(Error::InvalidParam("minimax needs m >= 2".into()));
    }
    check_positive_accuracy("epsilon", epsilon)?;
    if c_r <= 0.0 {
        return Err(Error::InvalidParam(
            "round constant must be positive".into(),
        ));
    }
    let ln_m = (m as f64).ln();
    let r = (c_r * ln_m / (epsilon * epsilon)).ceil().max(1.0) as u64;
    Ok((r, (ln_m / r as f64).sqrt()))
}

/// Default constant for [`mw_rounds_and_rate`].
pub const DEFAULT_MW_ROUND_CONSTANT: f64 = 8.0;

/// Ranking draws for the non-adaptive fixed-committee audit:
/// `ceil((1 / (2 eps^2)) ln(2 (m - |S|) / delta))`.
pub fn audit_fixed_t(m: usize, committee_size: usize, epsilon: f64, delta: f64) -> Result<u64> {
    if committee_size == 0 || committee_size >= m {
        return Err(Error::InvalidParam(
            "audited committee must be nonempty and proper".into(),
        ));
    }
    check_positive_accuracy("epsilon", epsilon)?;
    check_unit_open("delta", delta)?;
    let rivals = (m - committee_size) as f64;
    Ok((1.0 / (2.0 * epsilon * epsilon) * (2.0 * rivals / delta).ln()).ceil() as u64)
}

/// Ranking draws for empirical maximization over a finite family with
/// `n_family = sum over S of (m - |S|)` constraints:
/// `ceil((2 / eps^2) ln(2 n_family / delta))`.
pub fn audit_family_t(n_family: u64, epsilon: f64, delta: f64) -> Result<u64> {
    if n_family == 0 {
        return Err(Error::InvalidParam(
            "family has no rival constraints".into(),
        ));
    }
    check_positive_accuracy("epsilon", epsilon)?;
    check_unit_open("delta", delta)?;
    Ok((2.0 / (epsilon * epsilon) * (2.0 * n_family as f64 / delta).ln()).ceil() as u64)
}

/// Fresh rankings per minimax round for the sampled rival audit:
/// `ceil(c_audit * ln(m R / delta) / eps^2)`.
pub fn minimax_audit_t(
    m: usize,
    rounds: u64,
    epsilon: f64,
    delta: f64,
    c_audit: f64,
) -> Result<u64> {
    if m < 2 || rounds == 0 {
        return Err(Error::InvalidParam(
            "audit needs m >= 2 and rounds >= 1".into(),
        ));
    }
    check_positive_accuracy("epsilon", epsilon)?;
    check_unit_open("delta", delta)?;
    if c_audit <= 0.0 {
        return Err(Error::InvalidParam(
            "audit constant must be positive".into(),
        ));
    }
    let t = c_audit * ((m as f64 * rounds as f64) / delta).ln() / (epsilon * epsilon);
    Ok(t.ceil().max(1.0) as u64)
}

/// Default constant for [`minimax_audit_t`].
pub const DEFAULT_AUDIT_CONSTANT: f64 = 2.0;

fn check_committee_domain(m: usize, k: usize) -> Result<()> {
    if m == 0 || k == 0 || k > m {
        return Err(Error::InvalidParam(format!(
            "need 1 <= k <= m, got k={k}, m={m}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    #[test]
    fn elim_radius_matches_hand_values() {
        // ln(4*1*1 / (4/e^2)) = 2, sqrt(2/2) = 1
        let delta = 4.0 / (E * E);
        assert!((elim_radius(1, 1, delta).unwrap() - 1.0).abs() < 1e-12);
        // sqrt(ln(16 e^2) / 8) = sqrt((2 + ln 16) / 8)
        let expect = ((2.0 + 16f64.ln()) / 8.0).sqrt();
        assert!((expect - 0.772382).abs() < 1e-6);
        assert!((elim_radius(4, 1, delta).unwrap() - expect).abs() < 1e-12);
    }

    #[test]
    fn elim_radius_shrinks_roughly_as_inverse_sqrt() {
        let delta = 0.1;
        let r1 = elim_radius(1_000, 5, delta).unwrap();
        let r4 = elim_radius(4_000, 5, delta).unwrap();
        let ratio = r1 / r4;
        assert!(ratio > 1.8 && ratio < 2.1, "ratio {ratio}");
        // decreasing in r, increasing in pool and 1/delta
        assert!(elim_radius(10, 5, delta).unwrap() > elim_radius(11, 5, delta).unwrap());
        assert!(elim_radius(10, 6, delta).unwrap() > elim_radius(10, 5, delta).unwrap());
        assert!(elim_radius(10, 5, 0.05).unwrap() > elim_radius(10, 5, 0.1).unwrap());
    }

    #[test]
    fn audit_radius_matches_elim_shape() {
        let delta = 4.0 / (E * E);
        assert!((audit_radius(1, 1, delta).unwrap() - 1.0).abs() < 1e-12);
        assert!(audit_radius(100, 10, 0.1).unwrap() > audit_radius(100, 1, 0.1).unwrap());
    }

    #[test]
    fn erm_binary_t_hand_value() {
        // ceil(2 (ln 2 + 1)) = ceil(3.386) = 4
        assert_eq!(erm_binary_t(2, 1, 1.0, 2.0 / E).unwrap(), 4);
        // 1/eps^2 scaling up to ceiling
        let t1 = erm_binary_t(6, 2, 0.2, 0.1).unwrap();
        let t2 = erm_binary_t(6, 2, 0.1, 0.1).unwrap();
        assert!(t2 >= 4 * t1 - 4 && t2 <= 4 * t1 + 4);
        // k = m leaves only the ln(2/delta) term
        let t = erm_binary_t(2, 2, 0.5, 0.5).unwrap();
        assert_eq!(t, (2.0 / 0.25 * (4.0f64).ln()).ceil() as u64);
    }

    #[test]
    fn greedy_binary_t_hand_value() {
        // ceil((2 - 1/e)^2 / 2 * (ln 2 + 1)) = ceil(2.255) = 3
        assert_eq!(greedy_binary_t(2, 1, 1.0, 2.0 / E).unwrap(), 3);
        assert!(greedy_binary_t(2, 1, 0.5, 1.0).is_err());
    }

    #[test]
    fn ordinal_erm_t_hand_value() {
        // ceil(2 ln(2e)) = ceil(2(1 + ln 2)) = 4
        assert_eq!(ordinal_erm_t(2, 1, 1.0, 2.0 / E).unwrap(), 4);
        assert!(ordinal_erm_t(3, 3, 0.5, 0.1).is_err());
        assert!(ordinal_erm_t(8, 2, 0.2, 0.1).unwrap() > ordinal_erm_t(6, 2, 0.2, 0.1).unwrap());
    }

    #[test]
    fn certify_params_hand_values() {
        // ceil(6 ln 40) = ceil(22.13) = 23, floor(2 * 23 / 0.5) = 92
        let (r0, m0) = certify_params(1, 0.5, 0.1).unwrap();
        assert_eq!((r0, m0), (23, 92));
        let (r0, _) = certify_params(2, 0.5, 0.1).unwrap();
        assert_eq!(r0, 27);
        // monotone in k and 1/delta; out-of-domain delta rejected
        assert!(certify_params(4, 0.5, 0.1).unwrap().0 >= certify_params(2, 0.5, 0.1).unwrap().0);
        assert!(certify_params(2, 0.5, 0.05).unwrap().0 >= r0);
        assert!(certify_params(1, 0.5, 4.0 / E).is_err());
    }

    #[test]
    fn wofg_l_hand_value() {
        // 128 / 0.25 * ln 40 = 1888.7 -> 1889
        assert_eq!(wofg_l(1, 0.5, 0.1).unwrap(), 1889);
        let l = wofg_l(2, 0.5, 0.1).unwrap();
        let l_half = wofg_l(2, 0.25, 0.1).unwrap();
        assert!(l_half >= 4 * l - 4);
        // doubling k more than quadruples via the k^2 log(4k) growth
        assert!(wofg_l(2, 0.5, 0.1).unwrap() > 4 * wofg_l(1, 0.5, 0.1).unwrap());
        assert!(wofg_l(1, 0.5, 1.5).is_err(), "delta stays in (0, 1)");
    }

    #[test]
    fn mw_rounds_hand_value() {
        // m = 8, eps = 0.5, c = 8: R = ceil(8 ln 8 / 0.25) = 67
        let (r, eta) = mw_rounds_and_rate(8, 0.5, 8.0).unwrap();
        assert_eq!(r, 67);
        assert!((eta - (8f64.ln() / 67.0).sqrt()).abs() < 1e-12);
        let (r2, _) = mw_rounds_and_rate(8, 0.25, 8.0).unwrap();
        assert!(r2 >= 4 * r - 4);
    }

    #[test]
    fn audit_sizes() {
        let t = audit_fixed_t(6, 2, 0.1, 0.1).unwrap();
        assert_eq!(t, (50.0 * (80.0f64).ln()).ceil() as u64);
        assert!(audit_fixed_t(6, 6, 0.1, 0.1).is_err());
        assert!(audit_family_t(12, 0.1, 0.1).unwrap() > 0);
        assert!(minimax_audit_t(8, 10, 0.2, 0.1, 2.0).unwrap() > 0);
    }

    #[test]
    fn ln_binomial_consistency() {
        assert!((ln_binomial(6, 3).unwrap() - (20f64).ln()).abs() < 1e-12);
        assert!((ln_binomial(6, 0).unwrap()).abs() < 1e-12);
        assert!(ln_binomial(3, 4).is_err());
    }
}
