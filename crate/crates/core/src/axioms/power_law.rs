use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One row of a `K(N)` table; serialized as `{"n": .., "k": ..}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PowerLawEntry {
    pub n: u64,
    pub k: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum PowerLawVerdict {
    Consistent,
    /// `K(na nb) != K(na) K(nb)`.
    NotMultiplicative {
        na: u64,
        nb: u64,
    },
    /// `K(high) <= K(low)` for consecutive table rows.
    NotIncreasing {
        low: u64,
        high: u64,
    },
    /// `K(2)` is not a power of two, or row `n` breaks `K = N^r`.
    NotIntegerPower {
        n: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PowerLawResult {
    /// Exponent fitted from `K(2)`, when it is an integer.
    pub r: Option<u32>,
    #[serde(flatten)]
    pub verdict: PowerLawVerdict,
}

impl PowerLawResult {
    pub fn is_consistent(&self) -> bool {
        self.verdict == PowerLawVerdict::Consistent
    }
}

/// Checks a finite `K(N)` table for complete multiplicativity (on products
/// present in the table), strict increase, and `K = N^r` with integer `r`.
pub fn verify_power_law(table: &[PowerLawEntry]) -> Result<PowerLawResult> {
    if table.is_empty() {
        return Err(Error::domain("empty table"));
    }
    let mut k_of = BTreeMap::new();
    for e in table {
        if e.n == 0 {
            return Err(Error::domain("N must be positive"));
        }
        if k_of.insert(e.n, e.k).is_some() {
            return Err(Error::domain(format!("N = {} appears twice", e.n)));
        }
    }
    let k2 = *k_of
        .get(&2)
        .ok_or_else(|| Error::domain("table must contain N = 2"))?;

    for (&na, &ka) in &k_of {
        for (&nb, &kb) in k_of.range(na..) {
            let Some(product) = na.checked_mul(nb) else {
                continue;
            };
            if let Some(&kp) = k_of.get(&product) {
                if ka.checked_mul(kb) != Some(kp) {
                    return Ok(PowerLawResult {
                        r: None,
                        verdict: PowerLawVerdict::NotMultiplicative { na, nb },
                    });
                }
            }
        }
    }

    let rows: Vec<(u64, u64)> = k_of.iter().map(|(&n, &k)| (n, k)).collect();
    for w in rows.windows(2) {
        if w[1].1 <= w[0].1 {
            return Ok(PowerLawResult {
                r: None,
                verdict: PowerLawVerdict::NotIncreasing {
                    low: w[0].0,
                    high: w[1].0,
                },
            });
        }
    }

    if k2 < 2 || !k2.is_power_of_two() {
        return Ok(PowerLawResult {
            r: None,
            verdict: PowerLawVerdict::NotIntegerPower { n: 2 },
        });
    }
    let r = k2.trailing_zeros();
    for &(n, k) in &rows {
        if n.checked_pow(r) != Some(k) {
            return Ok(PowerLawResult {
                r: Some(r),
                verdict: PowerLawVerdict::NotIntegerPower { n },
            });
        }
    }
    Ok(PowerLawResult {
        r: Some(r),
        verdict: PowerLawVerdict::Consistent,
    })
}
