use num_rational::Ratio;
use serde::Serialize;

use super::{BitString, Dyadic};

/// A family of cylinder intervals, each member `u` standing for all infinite
/// sequences that extend `u`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct IntervalCover {
    pub members: Vec<BitString>,
}

/// The α-size of a cover: exact when α = 1, floating point otherwise.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum AlphaSize {
    Exact(Dyadic),
    Approx(f64),
}

impl AlphaSize {
    pub fn to_f64(&self) -> f64 {
        match self {
            AlphaSize::Exact(d) => d.to_f64(),
            AlphaSize::Approx(v) => *v,
        }
    }
}

impl IntervalCover {
    pub fn new(members: Vec<BitString>) -> Self {
        IntervalCover { members }
    }

    pub fn push(&mut self, u: BitString) {
        self.members.push(u);
    }

    /// Sum of `2^-|u|` over members, duplicates counted.
    pub fn measure(&self) -> Dyadic {
        self.members
            .iter()
            .map(|u| Dyadic::pow2_neg(u.len() as u32))
            .sum()
    }

    /// Sum of `2^(-alpha * |u|)`. Relative error of the floating-point path is
    /// below `2^-40` times the member count.
    pub fn alpha_size(&self, alpha: Ratio<u32>) -> AlphaSize {
        assert!(*alpha.numer() > 0, "alpha must be positive");
        if alpha.is_integer() && *alpha.numer() == 1 {
            return AlphaSize::Exact(self.measure());
        }
        let a = f64::from(*alpha.numer()) / f64::from(*alpha.denom());
        AlphaSize::Approx(
            self.members
                .iter()
                .map(|u| (-a * u.len() as f64).exp2())
                .sum(),
        )
    }
}

impl FromIterator<BitString> for IntervalCover {
    fn from_iter<I: IntoIterator<Item = BitString>>(iter: I) -> Self {
        IntervalCover::new(iter.into_iter().collect())
    }
}
