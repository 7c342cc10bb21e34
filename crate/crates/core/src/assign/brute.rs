//! Exhaustive search over every inclusion matrix.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::analytics::network_throughput;
use crate::error::{AnalysisError, AssignError};
use crate::model::{Assignment, AvailabilityModel, BinaryAssignmentMatrix, Sensing};
use crate::timing::MacTiming;

/// Largest `M·N` searched by default.
pub const DEFAULT_BRUTE_FORCE_CAP: usize = 18;

const CHUNK: u64 = 1 << 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Objective {
    SumThroughput,
    MaxMin,
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Objective::SumThroughput => "sum",
            Objective::MaxMin => "maxmin",
        })
    }
}

impl FromStr for Objective {
    type Err = AssignError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sum" => Ok(Objective::SumThroughput),
            "maxmin" | "max-min" => Ok(Objective::MaxMin),
            other => Err(AssignError::Config(format!("unknown objective {other:?}"))),
        }
    }
}

/// Best value and the lowest mask attaining it.
#[derive(Clone, Copy, Debug)]
struct Best {
    value: f64,
    mask: u64,
}

impl Best {
    fn better(self, other: Option<Best>) -> Best {
        match other {
            None => self,
            Some(o) => match self.value.partial_cmp(&o.value) {
                Some(Ordering::Greater) => self,
                Some(Ordering::Less) => o,
                _ if self.mask <= o.mask => self,
                _ => o,
            },
        }
    }
}

fn merge(a: Option<Best>, b: Option<Best>) -> Option<Best> {
    match a {
        None => b,
        Some(x) => Some(x.better(b)),
    }
}

/// Optimal sum and max-min assignments found in a single sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct Optima {
    pub sum: (Assignment, f64),
    pub max_min: (Assignment, f64),
    /// Candidates skipped because no window met the collision target.
    pub infeasible: u64,
}

impl Optima {
    pub fn get(&self, objective: Objective) -> &(Assignment, f64) {
        match objective {
            Objective::SumThroughput => &self.sum,
            Objective::MaxMin => &self.max_min,
        }
    }
}

/// Exhaustive optimum for one objective, with the default cap.
pub fn brute_force_optimal(
    model: &AvailabilityModel,
    timing: &MacTiming,
    objective: Objective,
) -> Result<(Assignment, f64), AssignError> {
    Ok(brute_force_all(model, timing, DEFAULT_BRUTE_FORCE_CAP)?
        .get(objective)
        .clone())
}

/// Evaluates every assignment once and keeps the optimum of both
/// objectives. Ties go to the lowest mask, where bit `i·N + j` is `x_ij`.
pub fn brute_force_all(
    model: &AvailabilityModel,
    timing: &MacTiming,
    cap: usize,
) -> Result<Optima, AssignError> {
    let (m, n) = (model.users(), model.channels());
    if m * n > cap || m * n > 40 {
        return Err(AssignError::CapExceeded {
            users: m,
            channels: n,
            cap,
        });
    }
    timing.validate()?;
    let total = 1u64 << (m * n);
    let chunks = total.div_ceil(CHUNK);
    type Acc = (Option<Best>, Option<Best>, u64);
    let (sum, max_min, infeasible) = (0..chunks)
        .into_par_iter()
        .map(|c| -> Result<Acc, AnalysisError> {
            let mut acc: Acc = (None, None, 0);
            for mask in c * CHUNK..((c + 1) * CHUNK).min(total) {
                let a = BinaryAssignmentMatrix::from_mask(m, n, u128::from(mask)).to_assignment();
                match network_throughput(model, &a, timing, &Sensing::Perfect) {
                    Ok(r) => {
                        acc.0 = merge(
                            acc.0,
                            Some(Best {
                                value: r.total,
                                mask,
                            }),
                        );
                        acc.1 = merge(
                            acc.1,
                            Some(Best {
                                value: r.min(),
                                mask,
                            }),
                        );
                    }
                    Err(
                        AnalysisError::WindowCapExceeded { .. }
                        | AnalysisError::OverheadTooLarge { .. },
                    ) => {
                        acc.2 += 1;
                    }
                    Err(e) => return Err(e),
                }
            }
            Ok(acc)
        })
        .try_reduce(
            || (None, None, 0),
            |x, y| Ok((merge(x.0, y.0), merge(x.1, y.1), x.2 + y.2)),
        )?;
    let decode = |b: Option<Best>| -> Result<(Assignment, f64), AssignError> {
        let b = b.ok_or(AssignError::NoFeasibleAssignment)?;
        Ok((
            BinaryAssignmentMatrix::from_mask(m, n, u128::from(b.mask)).to_assignment(),
            b.value,
        ))
    };
    Ok(Optima {
        sum: decode(sum)?,
        max_min: decode(max_min)?,
        infeasible,
    })
}
