//! Word families in the Torelli part of the curve stabilizers.

use serde::{Deserialize, Serialize};

use crate::words::{w, TwistWord};

/// The four template families, keyed by the stabilized curve and cover.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TorelliFamily {
    /// Curve `e`, cyclic cover.
    CyclicE,
    /// Curve `b`, cyclic cover.
    CyclicB,
    /// Curve `a`, Klein cover.
    KleinA,
    /// Curve `c`, Klein cover.
    KleinC,
}

impl TorelliFamily {
    pub const ALL: [TorelliFamily; 4] =
        [TorelliFamily::CyclicE, TorelliFamily::CyclicB, TorelliFamily::KleinA, TorelliFamily::KleinC];

    /// Family for a curve letter: `e`, `b` (cyclic) and `a`, `c` (Klein).
    pub fn for_curve(curve: char) -> Option<Self> {
        match curve {
            'e' => Some(TorelliFamily::CyclicE),
            'b' => Some(TorelliFamily::CyclicB),
            'a' => Some(TorelliFamily::KleinA),
            'c' => Some(TorelliFamily::KleinC),
            _ => None,
        }
    }

    pub fn template(self) -> &'static str {
        match self {
            TorelliFamily::CyclicE => "a^(-m-1) c^m b^-1 c^n (a b)^6 c^-n b c^-m a^(m+1)",
            TorelliFamily::CyclicB => "W (b c)^6 W^-1, W = c d e d^(m+1) a^-1 b^(-m-1) c^n d^-1",
            TorelliFamily::KleinA => "e^(-m-1) c^m d^-1 c^n (e d)^6 c^-n d c^-m e^(m+1)",
            TorelliFamily::KleinC => "V (a b)^6 V^-1, V = (a^-1 e)^(m+1) d e b^-1 c^n b d^-1 c",
        }
    }
}

/// The `(m, n)` member of a family.
pub fn torelli_word(family: TorelliFamily, m: i64, n: i64) -> TwistWord {
    match family {
        TorelliFamily::CyclicE => w(&format!("a^{} c^{m} b^-1 c^{n} (a b)^6 c^{} b c^{} a^{}", -m - 1, -n, -m, m + 1)),
        TorelliFamily::CyclicB => {
            let c = w(&format!("c d e d^{} a^-1 b^{} c^{n} d^-1", m + 1, -m - 1));
            w("(b c)^6").conjugate_by(&c)
        }
        TorelliFamily::KleinA => w(&format!("e^{} c^{m} d^-1 c^{n} (e d)^6 c^{} d c^{} e^{}", -m - 1, -n, -m, m + 1)),
        TorelliFamily::KleinC => {
            let v = w("a^-1 e").pow(m + 1).mul(&w(&format!("d e b^-1 c^{n} b d^-1 c")));
            w("(a b)^6").conjugate_by(&v)
        }
    }
}

/// All members with `m, n ∈ [lo, hi]`, ordered by `(m, n)`.
pub fn torelli_members(family: TorelliFamily, lo: i64, hi: i64) -> Vec<TwistWord> {
    (lo..=hi).flat_map(|m| (lo..=hi).map(move |n| torelli_word(family, m, n))).collect()
}
