//! Closed-form diameter bounds for the oriented (n,k)-star graph.

use crate::error::{Error, Result};

fn check(n: usize, k: usize) -> Result<()> {
    if k < 3 || n < k + 2 {
        return Err(Error::InvalidParams(format!(
            "bound needs k >= 3 and n - k >= 2, got n = {n}, k = {k}"
        )));
    }
    Ok(())
}

/// Regime-dependent reduction term of the routed-diameter bound; always
/// non-negative.
pub fn bound_reduction(n: usize, k: usize) -> usize {
    if 2 * k > n {
        2 * k - n
    } else if 3 * k > n {
        0
    } else {
        (n - 3 * k) / 2
    }
}

/// Upper bound on the oriented diameter guaranteed by the routing scheme:
/// `floor((n+k)/2) + 2k + 6 - reduction`. Also the default move budget of
/// the router.
pub fn oriented_diameter_bound(n: usize, k: usize) -> Result<usize> {
    check(n, k)?;
    Ok((n + k) / 2 + 2 * k + 6 - bound_reduction(n, k))
}

/// Worst case of the routed bound over the whole regime, as a function of
/// `k` alone: `floor(3.5k) + 6` when `n < 2k`, else `4k + 6`.
pub fn regime_cap(n: usize, k: usize) -> usize {
    if n < 2 * k {
        7 * k / 2 + 6
    } else {
        4 * k + 6
    }
}

/// Earlier published bounds: the Cheng–Lipman orientation bound and the
/// Cheng–Kruk routed bound. The latter circulates in inconsistent forms;
/// the comparison-table form is used here and emitted for inspection only.
pub fn prior_bounds(n: usize, k: usize) -> Result<(usize, usize)> {
    check(n, k)?;
    let cheng_lipman = if 2 * k <= n {
        10 * k - 5
    } else {
        5 * k + 5 * ((n - 1) / 2)
    };
    let cheng_kruk = if (n - k) % 2 == 1 {
        6 * (k - 3) + 13
    } else {
        7 * (k - 3) + 18
    };
    Ok((cheng_lipman, cheng_kruk))
}
