use super::{Major, RegimeLabel, ScalingError, ScalingPoint, ScalingValue, Scheme};
use serde::Serialize;

/// Term-by-term account of a protocol's generalized throughput exponent.
/// `result` is the minimum of `terms` under the [`ScalingValue`] order.
#[derive(Debug, Clone, Serialize)]
pub struct ExponentBreakdown {
    pub scheme: Scheme,
    pub terms: Vec<(&'static str, ScalingValue)>,
    pub result: ScalingValue,
}

impl ExponentBreakdown {
    fn from_terms(scheme: Scheme, terms: Vec<(&'static str, ScalingValue)>) -> Self {
        let values: Vec<ScalingValue> = terms.iter().map(|(_, v)| *v).collect();
        let result = ScalingValue::min_of(&values);
        Self { scheme, terms, result }
    }
}

/// Generalized aggregate throughput under a finite backhaul rate `n^η`:
/// the better of the two protocol breakdowns.
#[derive(Debug, Clone, Serialize)]
pub struct GeneralizedThroughput {
    pub value: ScalingValue,
    pub scheme: Scheme,
    pub ish: ExponentBreakdown,
    pub imh: ExponentBreakdown,
}

/// Aggregate throughput exponent with unlimited backhaul, and the protocol
/// achieving it.
///
/// Regime A is served by IMH at exponent `β + γ`. In regime B the protocols
/// cross at `α* = 1 + 2γ/(1−β)`: below it ISH achieves `1 + γ − α(1−β)/2`,
/// at or above it IMH achieves `(1+β)/2` (with an `n^{-ε}` slack from the
/// simultaneous-path count).
pub fn throughput_exponent_infinite(p: &ScalingPoint) -> (ScalingValue, Scheme) {
    match p.regime().major() {
        Major::A => (ScalingValue::power(p.beta + p.gamma), Scheme::Imh),
        Major::B => {
            let crossover = 1.0 + 2.0 * p.gamma / (1.0 - p.beta);
            if p.alpha < crossover {
                let e = 1.0 + p.gamma - p.alpha * (1.0 - p.beta) / 2.0;
                (ScalingValue::power(e), Scheme::Ish)
            } else {
                let e = (1.0 + p.beta) / 2.0;
                (ScalingValue::power(e).with_slack(), Scheme::Imh)
            }
        }
    }
}

/// Growth of the per-cell-pair flow count `X_ki` when `n^a` sources per cell
/// each pick a destination uniformly among `n^b` cells: `O(log n)` for
/// `a ≤ b`, else `Θ(n^{a−b})`.
pub fn xki_exponent(a: f64, b: f64) -> Result<ScalingValue, ScalingError> {
    if !(a > 0.0 && b > 0.0) {
        return Err(ScalingError::NonPositiveXkiArgs(a, b));
    }
    if a <= b {
        Ok(ScalingValue::log_n())
    } else {
        Ok(ScalingValue::power(a - b))
    }
}

/// Minimum per-link backhaul rate that sustains one protocol's own
/// infinite-backhaul throughput.
///
/// ISH is defined only in regime B (the only regime where it is ever used):
/// `n^{β+γ−1} log n` in B-1 and `n^{γ−β}` in B-2/B-3/B-4. IMH is defined
/// everywhere: `log n` in A-1/B-1/B-2/B-3, `n^{γ−β}` in A-2, and
/// `n^{(1−3β)/2−ε}` in B-4.
pub fn cbs_protocol_exponent(
    p: &ScalingPoint,
    scheme: Scheme,
) -> Result<ScalingValue, ScalingError> {
    let regime = p.regime();
    match scheme {
        Scheme::Ish => match regime {
            RegimeLabel::A1 | RegimeLabel::A2 => Err(ScalingError::IshOutsideRegimeB(regime)),
            RegimeLabel::B1 => Ok(ScalingValue::power(p.beta + p.gamma - 1.0).with_polylog(1)),
            RegimeLabel::B2 | RegimeLabel::B3 | RegimeLabel::B4 => {
                Ok(ScalingValue::power(p.gamma - p.beta))
            }
        },
        Scheme::Imh => match regime {
            RegimeLabel::A1 | RegimeLabel::B1 | RegimeLabel::B2 | RegimeLabel::B3 => {
                Ok(ScalingValue::log_n())
            }
            RegimeLabel::A2 => Ok(ScalingValue::power(p.gamma - p.beta)),
            RegimeLabel::B4 => {
                Ok(ScalingValue::power((1.0 - 3.0 * p.beta) / 2.0).with_slack())
            }
        },
    }
}

/// Minimum per-link backhaul rate preserving the full (protocol-optimal)
/// throughput scaling: the IMH requirement in regime A, and the larger of
/// the two protocol requirements in regime B. Net effect: `log n` in
/// A-1/B-1/B-2 and `n^{γ−β}` in A-2/B-3/B-4.
pub fn cbs_exponent(p: &ScalingPoint) -> ScalingValue {
    let imh = cbs_protocol_exponent(p, Scheme::Imh).expect("IMH covers all regimes");
    match p.regime().major() {
        Major::A => imh,
        Major::B => {
            let ish = cbs_protocol_exponent(p, Scheme::Ish).expect("regime B");
            ScalingValue::max(ish, imh)
        }
    }
}

/// True when the provisioned backhaul rate `n^η` scales strictly slower than
/// the minimum required rate, so the backhaul rather than the wireless
/// segment caps the achievable scaling.
pub fn is_infrastructure_limited(p: &ScalingPoint) -> Result<bool, ScalingError> {
    let eta = p.eta()?;
    let provisioned = ScalingValue::power(eta);
    Ok(provisioned < cbs_exponent(p))
}

/// Aggregate throughput exponent under an arbitrary backhaul rate `n^η`.
///
/// Each protocol's rate is the minimum of its wireless terms and the
/// throughput its backhaul can carry:
///
/// * ISH: `min{ n^{β+γ−(α/2−1)(1−β)}, n^{2β+η}, n^{1+η}/log n }`
/// * IMH: `min{ n^{β+γ}, n^{(1+β)/2−ε}, n^{2β+η}, n^{β+γ+η}/log n,
///   n^{(1+β)/2+η−ε}/log n }`
///
/// and the network achieves the better of the two.
pub fn generalized_exponent(p: &ScalingPoint) -> Result<GeneralizedThroughput, ScalingError> {
    let eta = p.eta()?;
    let (a, b, g) = (p.alpha, p.beta, p.gamma);

    let ish = ExponentBreakdown::from_terms(
        Scheme::Ish,
        vec![
            ("wireless", ScalingValue::power(b + g - (a / 2.0 - 1.0) * (1.0 - b))),
            ("backhaul-pairs", ScalingValue::power(2.0 * b + eta)),
            ("backhaul-flows", ScalingValue::power(1.0 + eta).with_polylog(-1)),
        ],
    );
    let path_limit = b + (1.0 - b) / 2.0;
    let imh = ExponentBreakdown::from_terms(
        Scheme::Imh,
        vec![
            ("antenna-limit", ScalingValue::power(b + g)),
            ("path-limit", ScalingValue::power(path_limit).with_slack()),
            ("backhaul-pairs", ScalingValue::power(2.0 * b + eta)),
            ("backhaul-antenna-hops", ScalingValue::power(b + g + eta).with_polylog(-1)),
            (
                "backhaul-path-hops",
                ScalingValue::power(path_limit + eta).with_polylog(-1).with_slack(),
            ),
        ],
    );

    let value = ScalingValue::max(ish.result, imh.result);
    let scheme = match ish.result.order(&imh.result) {
        std::cmp::Ordering::Greater => Scheme::Ish,
        std::cmp::Ordering::Less => Scheme::Imh,
        std::cmp::Ordering::Equal => {
            if ish.result.epsilon_slack && !imh.result.epsilon_slack {
                Scheme::Imh
            } else {
                Scheme::Ish
            }
        }
    };
    Ok(GeneralizedThroughput { value, scheme, ish, imh })
}

/// Regime groups for the worst-case backhaul requirement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WorstCaseGroup {
    /// Regimes A, B-1, B-2 and B-3 together.
    AAndB123,
    /// Regime B-4 alone.
    B4,
}

/// Supremum of [`cbs_exponent`] over a regime group: `n^{1/2}` over
/// A ∪ B-1..B-3 and `n` over B-4, so `Θ(n)` backhaul suffices everywhere.
pub fn regime_worst_case_cbs(group: WorstCaseGroup) -> ScalingValue {
    match group {
        WorstCaseGroup::AAndB123 => ScalingValue::power(0.5),
        WorstCaseGroup::B4 => ScalingValue::power(1.0),
    }
}
