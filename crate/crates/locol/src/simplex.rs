//! Exact-rational feasibility solver: phase-1 simplex with Bland's
//! rule (guaranteed termination, no floating point anywhere).

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

type Rat = BigRational;

/// Finds `c` with `pinned . c = target` and `|boxes[x] . c| <= 1` for
/// every box row, or `None` if no such point exists.
///
/// Formulated as phase-1 simplex: free variables split into positive
/// parts, slacks on both box sides, one artificial variable on the
/// pinned equality; feasible iff the artificial can be driven to zero.
pub fn feasible_point(pinned: &[Rat], target: &Rat, boxes: &[Vec<Rat>]) -> Option<Vec<Rat>> {
    let r = pinned.len();
    let nb = boxes.len();
    debug_assert!(boxes.iter().all(|b| b.len() == r));
    let rows = 1 + 2 * nb;
    let ncols = 2 * r + 2 * nb + 1; // p, q, s, t, artificial
    let art_col = ncols - 1;

    let mut tab = vec![vec![Rat::zero(); ncols + 1]; rows]; // last col = rhs
    let mut basis = vec![0usize; rows];

    // Equality row, rhs made non-negative so the artificial starts feasible.
    let flip = target.is_negative();
    for j in 0..r {
        let v = if flip { -&pinned[j] } else { pinned[j].clone() };
        tab[0][j] = v.clone();
        tab[0][r + j] = -v;
    }
    tab[0][art_col] = Rat::one();
    tab[0][ncols] = if flip { -target } else { target.clone() };
    basis[0] = art_col;

    for (x, b) in boxes.iter().enumerate() {
        // b.c + s = 1
        let row = 1 + x;
        for j in 0..r {
            tab[row][j] = b[j].clone();
            tab[row][r + j] = -&b[j];
        }
        tab[row][2 * r + x] = Rat::one();
        tab[row][ncols] = Rat::one();
        basis[row] = 2 * r + x;
        // -b.c + t = 1
        let row = 1 + nb + x;
        for j in 0..r {
            tab[row][j] = -&b[j];
            tab[row][r + j] = b[j].clone();
        }
        tab[row][2 * r + nb + x] = Rat::one();
        tab[row][ncols] = Rat::one();
        basis[row] = 2 * r + nb + x;
    }

    // Reduced costs for minimising the artificial, priced out against
    // the starting basis: obj[j] = cost[j] - tab[0][j].
    let mut obj = vec![Rat::zero(); ncols + 1];
    for j in 0..=ncols {
        obj[j] = -&tab[0][j];
    }
    obj[art_col] += Rat::one();

    loop {
        // Bland: entering column is the lowest-index negative reduced cost.
        let Some(entering) = (0..ncols).find(|&j| obj[j].is_negative()) else {
            break;
        };
        // Ratio test; ties broken by the smallest basic column index.
        let mut leaving: Option<(usize, Rat)> = None;
        for row in 0..rows {
            if tab[row][entering].is_positive() {
                let ratio = &tab[row][ncols] / &tab[row][entering];
                match &leaving {
                    Some((lrow, best)) => {
                        if ratio < *best || (ratio == *best && basis[row] < basis[*lrow]) {
                            leaving = Some((row, ratio));
                        }
                    }
                    None => leaving = Some((row, ratio)),
                }
            }
        }
        let (lrow, _) = leaving?; // unbounded cannot happen for a bounded phase-1, but bail safely
        let pivot = tab[lrow][entering].clone();
        for v in tab[lrow].iter_mut() {
            *v /= &pivot;
        }
        for row in 0..rows {
            if row != lrow && !tab[row][entering].is_zero() {
                let factor = tab[row][entering].clone();
                for j in 0..=ncols {
                    let delta = &factor * &tab[lrow][j];
                    tab[row][j] -= delta;
                }
            }
        }
        if !obj[entering].is_zero() {
            let factor = obj[entering].clone();
            for j in 0..=ncols {
                let delta = &factor * &tab[lrow][j];
                obj[j] -= delta;
            }
        }
        basis[lrow] = entering;
    }

    // Objective value is -obj[rhs]; feasible iff the artificial is zero.
    let art_value = (0..rows)
        .find(|&row| basis[row] == art_col)
        .map(|row| tab[row][ncols].clone())
        .unwrap_or_else(Rat::zero);
    if !art_value.is_zero() {
        return None;
    }

    let mut c = vec![Rat::zero(); r];
    for row in 0..rows {
        let col = basis[row];
        if col < r {
            c[col] += &tab[row][ncols];
        } else if col < 2 * r {
            c[col - r] -= &tab[row][ncols];
        }
    }
    Some(c)
}
