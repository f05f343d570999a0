use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::{bordered, denominator_bound, eta, milp_solve, MilpInstance, MilpResult, MilpWitness, NormalConfiguration};
use crate::error::{Error, Result};
use crate::exact::{QMatrix, Rational};
use crate::lp::Sense;

/// Default box bound `R = 12 (d + 1)`.
pub fn default_box(dim: usize) -> i64 {
    12 * (dim as i64 + 1)
}

/// Every attainable Fine number of the configuration is a multiple of
/// `1 / step_denominator`, so lowering `U` by that amount skips nothing.
pub fn step_denominator(config: &NormalConfiguration) -> BigInt {
    denominator_bound(config)
}

/// Maximizes `n^F` over `[lower, upper]`, then repeatedly lowers `U` just
/// below the last optimum. Returns the optima in decreasing order.
pub fn scan_range(
    config: &NormalConfiguration,
    lower: &Rational,
    upper: &Rational,
    box_bound: i64,
) -> Result<Vec<MilpWitness>> {
    let step = Rational::new(BigInt::from(1), step_denominator(config));
    let mut upper = upper.clone();
    let mut found = Vec::new();
    while &upper >= lower {
        let inst = MilpInstance::new(config.clone(), lower.clone(), upper.clone(), Sense::Maximize).with_box(box_bound);
        match milp_solve(&inst)? {
            MilpResult::Infeasible => break,
            MilpResult::Optimal(w) => {
                upper = &w.fine_number - &step;
                found.push(w);
            }
        }
    }
    Ok(found)
}

/// Distinct values `mu^F >= epsilon` realized with this configuration, in
/// decreasing order.
pub fn spectrum_scan(config: &NormalConfiguration, epsilon: &Rational, box_bound: i64) -> Result<Vec<Rational>> {
    if !epsilon.is_positive() {
        return Err(Error::InvalidArgument(format!("epsilon must be positive, got {epsilon}")));
    }
    let lower = Rational::new(BigInt::from(1), step_denominator(config));
    let witnesses = scan_range(config, &lower, &epsilon.recip(), box_bound)?;
    let mut values: Vec<Rational> = witnesses.iter().map(MilpWitness::mu_f).collect();
    values.sort_by(|a, b| b.cmp(a));
    values.dedup();
    Ok(values)
}

/// Minimizes `n^F >= 1 / |det [A | -1]|` with the rows of `A` as the
/// configuration.
pub fn realize_numerator(a: &QMatrix, box_bound: i64, verify: bool) -> Result<MilpWitness> {
    eta(a)?;
    let rows: Vec<Vec<i64>> = a.rows().iter().map(|r| r.to_i64().ok_or_else(|| Error::NotIntegral(r.to_string()))).collect::<Result<_>>()?;
    let config = NormalConfiguration::new(a.ncols(), rows)?;
    let det = bordered(a).det()?.abs();
    debug_assert!(!det.is_zero());
    let reach: i64 = config.normals.iter().map(|r| r.iter().map(|x| x.abs()).sum::<i64>()).max().unwrap_or(1);
    let upper = Rational::from_integer(((box_bound + 1) * reach).into());
    let inst = MilpInstance::new(config, det.recip(), upper, Sense::Minimize).with_box(box_bound).with_verification(verify);
    match milp_solve(&inst)? {
        MilpResult::Optimal(w) => Ok(w),
        MilpResult::Infeasible => Err(Error::MilpInfeasible(box_bound)),
    }
}
