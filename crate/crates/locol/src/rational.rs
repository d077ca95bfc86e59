//! The exact-rational pipeline: nullspace of the homogeneous incidence
//! system, LP feasibility for the pinned solutions v^i, randomly
//! combined unbalanced solutions, the dyadic bucket colouring and the
//! sign 2-colouring. No inexact arithmetic anywhere.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::SolveError;
use crate::hypergraph::{verify_lo_colouring, Colouring, Hypergraph};
use crate::simplex::feasible_point;

pub type Rat = BigRational;
pub type RationalVector = Vec<Rat>;

#[derive(Debug, Clone)]
pub struct RationalSolveReport {
    pub colouring: Colouring,
    pub colours_used: usize,
    /// Rejected samples before the accepted one.
    pub retries: usize,
    /// max/min absolute coordinate of the accepted u.
    pub m_over_m: Rat,
    pub elapsed: Duration,
}

/// 0/1 incidence matrix of `h` over the rationals, m rows by n columns.
pub fn incidence_matrix_q(h: &Hypergraph) -> Vec<Vec<Rat>> {
    let mut a = vec![vec![Rat::zero(); h.n()]; h.m()];
    for (j, e) in h.edges().iter().enumerate() {
        for &v in e.vertices() {
            a[j][v as usize - 1] = Rat::one();
        }
    }
    a
}

/// Basis of the exact rational nullspace of `a` (Gauss-Jordan to RREF,
/// lowest-index pivot columns; one basis vector per free column).
pub fn nullspace_q(a: &[Vec<Rat>], n: usize) -> Vec<RationalVector> {
    let rows = a.len();
    let mut m: Vec<Vec<Rat>> = a.to_vec();
    let mut pivot_cols = Vec::new();
    let mut pivot_row = 0usize;
    for col in 0..n {
        let Some(r) = (pivot_row..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(pivot_row, r);
        let inv = m[pivot_row][col].clone();
        for v in m[pivot_row].iter_mut() {
            *v /= &inv;
        }
        for r2 in 0..rows {
            if r2 != pivot_row && !m[r2][col].is_zero() {
                let factor = m[r2][col].clone();
                for j in 0..n {
                    let delta = &factor * &m[pivot_row][j];
                    m[r2][j] -= delta;
                }
            }
        }
        pivot_cols.push(col);
        pivot_row += 1;
        if pivot_row == rows {
            break;
        }
    }
    let mut is_pivot = vec![false; n];
    for &c in &pivot_cols {
        is_pivot[c] = true;
    }
    let mut basis = Vec::new();
    for free in (0..n).filter(|&c| !is_pivot[c]) {
        let mut v = vec![Rat::zero(); n];
        v[free] = Rat::one();
        for (row, &col) in pivot_cols.iter().enumerate() {
            v[col] = -&m[row][free];
        }
        basis.push(v);
    }
    basis
}

#[cfg(test)]
fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Solves the LP for v^i: `A v = 0`, `v_i = 1/2`, `|v_x| <= 1` — in the
/// nullspace-coefficient parameterization, with the certificate
/// re-checked exactly before returning. `i` is 1-based.
pub fn find_vi(
    h: &Hypergraph,
    nullspace: &[RationalVector],
    i: u32,
) -> Result<RationalVector, SolveError> {
    let n = h.n();
    let x = i as usize - 1;
    let r = nullspace.len();
    let half = Rat::new(BigInt::one(), BigInt::from(2));
    // pinned row: coefficients of c_j at coordinate x
    let pinned: Vec<Rat> = (0..r).map(|j| nullspace[j][x].clone()).collect();
    let boxes: Vec<Vec<Rat>> = (0..n)
        .map(|y| (0..r).map(|j| nullspace[j][y].clone()).collect())
        .collect();
    let Some(c) = feasible_point(&pinned, &half, &boxes) else {
        return Err(SolveError::Infeasible(i));
    };
    let mut v = vec![Rat::zero(); n];
    for (j, z) in nullspace.iter().enumerate() {
        if !c[j].is_zero() {
            for (vx, zx) in v.iter_mut().zip(z) {
                *vx += &c[j] * zx;
            }
        }
    }
    // Certificate check: all three constraint families, exactly.
    if v[x] != half {
        return Err(SolveError::Infeasible(i));
    }
    if v.iter().any(|vx| vx.abs() > Rat::one()) {
        return Err(SolveError::Infeasible(i));
    }
    for e in h.edges() {
        let s: Rat = e.vertices().iter().map(|&t| v[t as usize - 1].clone()).sum();
        assert!(s.is_zero(), "nullspace vector violates an edge equation");
    }
    Ok(v)
}

/// All n pinned solutions, sharing one nullspace computation.
pub fn find_all_vi(h: &Hypergraph) -> Result<Vec<RationalVector>, SolveError> {
    let a = incidence_matrix_q(h);
    let ns = nullspace_q(&a, h.n());
    (1..=h.n() as u32).map(|i| find_vi(h, &ns, i)).collect()
}

/// `u = sum y_i v^i` with each `y_i = k / 2^31`, k uniform in
/// `[-2^31, 2^31]`: an exact-rational stand-in for uniform `[-1, 1]`.
pub fn sample_u<R: Rng>(vis: &[RationalVector], rng: &mut R) -> RationalVector {
    let n = vis.first().map_or(0, Vec::len);
    let denom = BigInt::from(1i64 << 31);
    let mut u = vec![Rat::zero(); n];
    for vi in vis {
        let k = rng.random_range(-(1i64 << 31)..=1i64 << 31);
        if k == 0 {
            continue;
        }
        let y = Rat::new(BigInt::from(k), denom.clone());
        for (ux, vx) in u.iter_mut().zip(vi) {
            *ux += &y * vx;
        }
    }
    u
}

/// Unique-minimum bucket colours of `u` rescaled to max 1: positive
/// coordinates get even colours, negative odd, halving the dyadic
/// scale every two colours.
pub fn provisional_colours(u: &[Rat]) -> Result<Vec<u32>, SolveError> {
    if let Some(x) = u.iter().position(|v| v.is_zero()) {
        return Err(SolveError::ZeroCoordinate(x as u32 + 1));
    }
    let max = u.iter().map(Signed::abs).max().expect("nonempty");
    let quarter = Rat::new(BigInt::one(), BigInt::from(4));
    let colours = u
        .iter()
        .map(|ux| {
            let v = ux / &max;
            if v.is_positive() {
                // colour 2l where 2^-(2l+1) < v <= 2^-(2l-1)
                let mut level = 0u32;
                let mut threshold = Rat::new(BigInt::one(), BigInt::from(2));
                while v <= threshold {
                    threshold *= &quarter;
                    level += 1;
                }
                2 * level
            } else {
                // colour 2l+1 where -2^-2l <= v < -2^-(2l+2)
                let mut level = 0u32;
                let mut threshold = -quarter.clone();
                while v >= threshold {
                    threshold *= &quarter;
                    level += 1;
                }
                2 * level + 1
            }
        })
        .collect();
    Ok(colours)
}

/// The unbalanced-solution colouring: provisional unique-minimum
/// buckets with the colour order reversed at the end.
pub fn unbalanced_colouring(u: &[Rat]) -> Result<Colouring, SolveError> {
    let provisional = provisional_colours(u)?;
    let top = *provisional.iter().max().expect("nonempty");
    Ok(Colouring::from_assignment(
        provisional.into_iter().map(|c| top - c).collect(),
    ))
}

/// Colour by sign: a non-monochromatic 2-colouring whenever `Au = 0`.
pub fn sign_two_colouring(u: &[Rat]) -> Result<Colouring, SolveError> {
    if let Some(x) = u.iter().position(|v| v.is_zero()) {
        return Err(SolveError::ZeroCoordinate(x as u32 + 1));
    }
    Ok(Colouring::from_assignment(
        u.iter().map(|v| u32::from(v.is_positive())).collect(),
    ))
}

/// A certified rational upper bound on ln(n), via `ln n = k ln 2 +
/// ln(n / 2^k)` and a truncated atanh series with its tail bound.
pub fn ln_upper_bound(n: u64) -> Rat {
    assert!(n >= 2);
    let k = 63 - n.leading_zeros() as u64;
    let q = Rat::new(BigInt::from(n), BigInt::from(1u64 << k));
    let two = Rat::from(BigInt::from(2));
    ln_upper_small(&two) * Rat::from(BigInt::from(k)) + ln_upper_small(&q)
}

/// Upper bound on ln(z) for rational z in [1, 2]:
/// ln z = 2 atanh(x), x = (z-1)/(z+1) <= 1/3; truncated series plus a
/// geometric bound on the tail.
fn ln_upper_small(z: &Rat) -> Rat {
    debug_assert!(*z >= Rat::one() && *z <= Rat::from(BigInt::from(2)));
    let x = (z - Rat::one()) / (z + Rat::one());
    if x.is_zero() {
        return Rat::zero();
    }
    let x2 = &x * &x;
    let mut term = x.clone(); // x^(2j+1)
    let mut sum = Rat::zero();
    const TERMS: u32 = 12;
    for j in 0..TERMS {
        sum += &term / Rat::from(BigInt::from(2 * j + 1));
        term *= &x2;
    }
    // term is now x^(2*TERMS+1), the first omitted term's power;
    // geometric bound on everything from there on.
    let tail = &term / (Rat::from(BigInt::from(2 * TERMS + 1)) * (Rat::one() - &x2));
    (sum + tail) * Rat::from(BigInt::from(2))
}

/// Accept/reject thresholds for a sampled u on n vertices: the minimum
/// absolute coordinate must exceed `1/(4n)` and every squared
/// coordinate must stay below `4 n ln n` (certified upper bound), i.e.
/// `|u_x| < 2 sqrt(n ln n)` decided exactly by squaring.
pub fn acceptance_thresholds(n: usize) -> (Rat, Rat) {
    let min_thr = Rat::new(BigInt::one(), BigInt::from(4 * n as u64));
    let max_sq = Rat::from(BigInt::from(4 * n as u64)) * ln_upper_bound(n as u64);
    (min_thr, max_sq)
}

/// The exact-rational solver: n LPs for the v^i, then rejection sampling of
/// u until both threshold tests pass, then the unbalanced colouring.
pub fn solve_rational(
    h: &Hypergraph,
    seed: u64,
    max_retries: usize,
) -> Result<RationalSolveReport, SolveError> {
    if h.n() < 8 {
        return Err(SolveError::TooSmall(h.n()));
    }
    let start = Instant::now();
    let vis = find_all_vi(h)?;
    let (min_thr, max_sq) = acceptance_thresholds(h.n());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for retry in 0..max_retries {
        let u = sample_u(&vis, &mut rng);
        if u.iter().any(Zero::is_zero) {
            continue;
        }
        let min_abs = u.iter().map(Signed::abs).min().expect("nonempty");
        if min_abs <= min_thr {
            continue;
        }
        let max_abs = u.iter().map(Signed::abs).max().expect("nonempty");
        if &max_abs * &max_abs >= max_sq {
            continue;
        }
        let colouring = unbalanced_colouring(&u)?;
        debug_assert!(verify_lo_colouring(h, &colouring).valid);
        return Ok(RationalSolveReport {
            colours_used: colouring.colours_used(),
            colouring,
            retries: retry,
            m_over_m: max_abs / min_abs,
            elapsed: start.elapsed(),
        });
    }
    Err(SolveError::RetriesExhausted(max_retries))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::Edge;

    fn h(n: usize, edges: &[&[u32]]) -> Hypergraph {
        Hypergraph::new(
            n,
            edges.iter().map(|e| Edge::new(e.to_vec()).unwrap()).collect(),
            false,
        )
        .unwrap()
    }

    fn rat(n: i64, d: i64) -> Rat {
        Rat::new(n.into(), d.into())
    }

    #[test]
    fn nullspace_single_edge() {
        let g = h(3, &[&[1, 2, 3]]);
        let a = incidence_matrix_q(&g);
        let ns = nullspace_q(&a, 3);
        assert_eq!(ns.len(), 2);
        for z in &ns {
            assert!(dot(&a[0], z).is_zero());
        }
    }

    #[test]
    fn nullspace_of_empty_matrix_is_standard_basis() {
        let ns = nullspace_q(&[], 3);
        assert_eq!(ns.len(), 3);
        for (i, z) in ns.iter().enumerate() {
            for (j, v) in z.iter().enumerate() {
                assert_eq!(v.is_one(), i == j);
            }
        }
    }

    #[test]
    fn nullspace_dimension_matches_rank() {
        let g = h(6, &[&[1, 2, 3], &[2, 3, 4], &[4, 5, 6]]);
        let a = incidence_matrix_q(&g);
        let ns = nullspace_q(&a, 6);
        assert_eq!(ns.len(), 3); // rank 3
        for z in &ns {
            for row in &a {
                assert!(dot(row, z).is_zero());
            }
        }
    }

    #[test]
    fn find_vi_single_edge() {
        let g = h(3, &[&[1, 2, 3]]);
        let a = incidence_matrix_q(&g);
        let ns = nullspace_q(&a, 3);
        for i in 1..=3u32 {
            let v = find_vi(&g, &ns, i).unwrap();
            assert_eq!(v[i as usize - 1], rat(1, 2));
            assert!(v.iter().all(|x| x.abs() <= Rat::one()));
            let s: Rat = v.iter().cloned().sum();
            assert!(s.is_zero());
        }
    }

    #[test]
    fn find_vi_infeasible_on_forced_zero() {
        // x1+x2 = 0, x2+x3 = 0, x1+x3 = 0 forces x = 0, contradicting
        // the pinned coordinate 1/2.
        let g = h(3, &[&[1, 2], &[2, 3], &[1, 3]]);
        let a = incidence_matrix_q(&g);
        let ns = nullspace_q(&a, 3);
        assert!(matches!(
            find_vi(&g, &ns, 1),
            Err(SolveError::Infeasible(1))
        ));
    }

    #[test]
    fn sample_u_stays_in_nullspace() {
        let g = h(5, &[&[1, 2, 3], &[3, 4, 5]]);
        let vis = find_all_vi(&g).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = incidence_matrix_q(&g);
        for _ in 0..20 {
            let u = sample_u(&vis, &mut rng);
            for row in &a {
                assert!(dot(row, &u).is_zero());
            }
        }
    }

    #[test]
    fn unbalanced_hand_examples() {
        // u = (1, -1/2, -1/2): provisional (0,1,1), reversed (1,0,0).
        let u = vec![rat(1, 1), rat(-1, 2), rat(-1, 2)];
        assert_eq!(provisional_colours(&u).unwrap(), vec![0, 1, 1]);
        let c = unbalanced_colouring(&u).unwrap();
        assert_eq!(
            (c.get(1), c.get(2), c.get(3)),
            (Some(1), Some(0), Some(0))
        );
        let g = h(3, &[&[1, 2, 3]]);
        assert!(verify_lo_colouring(&g, &c).valid);

        // u = (3/4, -1/4, -1/2) rescales to (1, -1/3, -2/3).
        let u = vec![rat(3, 4), rat(-1, 4), rat(-1, 2)];
        assert_eq!(provisional_colours(&u).unwrap(), vec![0, 1, 1]);
        assert!(verify_lo_colouring(&g, &unbalanced_colouring(&u).unwrap()).valid);
    }

    #[test]
    fn provisional_bucket_boundaries() {
        // Scaled values land in the stated half-open intervals.
        let u = vec![rat(1, 1), rat(1, 2), rat(-1, 4), rat(-1, 1)];
        assert_eq!(provisional_colours(&u).unwrap(), vec![0, 2, 3, 1]);
    }

    #[test]
    fn zero_coordinate_rejected() {
        let u = vec![rat(1, 1), Rat::zero()];
        assert!(matches!(
            provisional_colours(&u),
            Err(SolveError::ZeroCoordinate(2))
        ));
        assert!(matches!(
            sign_two_colouring(&u),
            Err(SolveError::ZeroCoordinate(2))
        ));
    }

    #[test]
    fn sign_colouring_non_monochromatic() {
        let u = vec![rat(1, 1), rat(-1, 2), rat(-1, 2)];
        let c = sign_two_colouring(&u).unwrap();
        assert_eq!((c.get(1), c.get(2), c.get(3)), (Some(1), Some(0), Some(0)));
    }

    #[test]
    fn ln_upper_bound_is_tight_upper_bound() {
        for &n in &[2u64, 3, 8, 64, 100, 2048] {
            let ub = ln_upper_bound(n);
            let approx = ub.numer().to_string().parse::<f64>().unwrap()
                / ub.denom().to_string().parse::<f64>().unwrap();
            let truth = (n as f64).ln();
            assert!(approx >= truth - 1e-12, "n={n}");
            assert!(approx <= truth + 1e-6, "n={n}");
        }
    }

    #[test]
    fn solve_rational_small_n_rejected() {
        let g = h(3, &[&[1, 2, 3]]);
        assert!(matches!(
            solve_rational(&g, 0, 8),
            Err(SolveError::TooSmall(3))
        ));
    }
}
