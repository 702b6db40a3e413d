use std::cmp::Ordering;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Eigenvalues repeated by algebraic multiplicity, in canonical order:
/// descending real part, ties broken by descending imaginary part.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "Vec<Complex64>", from = "Vec<Complex64>")]
pub struct Spectrum {
    values: Vec<Complex64>,
}

fn canonical_cmp(a: &Complex64, b: &Complex64) -> Ordering {
    b.re.total_cmp(&a.re).then_with(|| b.im.total_cmp(&a.im))
}

impl Spectrum {
    pub fn new(mut values: Vec<Complex64>) -> Self {
        values.sort_by(canonical_cmp);
        Self { values }
    }

    pub fn from_real(values: &[f64]) -> Self {
        Self::new(values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max_imag_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |acc, z| acc.max(z.im.abs()))
    }

    /// Real parts sorted in descending order.
    pub fn real_descending(&self) -> Vec<f64> {
        let mut re: Vec<f64> = self.values.iter().map(|z| z.re).collect();
        re.sort_by(|a, b| b.total_cmp(a));
        re
    }
}

impl From<Vec<Complex64>> for Spectrum {
    fn from(values: Vec<Complex64>) -> Self {
        Self::new(values)
    }
}

impl From<Spectrum> for Vec<Complex64> {
    fn from(s: Spectrum) -> Self {
        s.values
    }
}

fn check_lengths(a: &Spectrum, b: &Spectrum) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch(a.len(), b.len()));
    }
    Ok(())
}

/// True iff some perfect matching pairs every value of `a` with a value of
/// `b` at distance ≤ `tol`.
pub fn spectra_equal(a: &Spectrum, b: &Spectrum, tol: f64) -> Result<bool> {
    check_lengths(a, b)?;
    if greedy_match(&a.values, &b.values, tol) {
        return Ok(true);
    }
    Ok(perfect_matching_within(&a.values, &b.values, tol))
}

/// Bottleneck distance: the smallest `t` such that a perfect matching with
/// all pair distances ≤ `t` exists.
pub fn matching_distance(a: &Spectrum, b: &Spectrum) -> Result<f64> {
    check_lengths(a, b)?;
    let n = a.len();
    if n == 0 {
        return Ok(0.0);
    }
    let mut candidates: Vec<f64> = a
        .values
        .iter()
        .flat_map(|x| b.values.iter().map(move |y| (x - y).norm()))
        .collect();
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();

    // Every value needs some partner, so the bottleneck is at least the
    // largest nearest-neighbour distance in either direction.
    let nearest = |xs: &[Complex64], ys: &[Complex64]| {
        xs.iter()
            .map(|x| ys.iter().map(|y| (x - y).norm()).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    let floor = nearest(&a.values, &b.values).max(nearest(&b.values, &a.values));
    let mut lo = candidates.partition_point(|&c| c < floor);
    let mut hi = candidates.len() - 1;
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if perfect_matching_within(&a.values, &b.values, candidates[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(candidates[lo])
}

fn greedy_match(a: &[Complex64], b: &[Complex64], tol: f64) -> bool {
    let mut used = vec![false; b.len()];
    for x in a {
        let best = b
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, y)| (j, (x - y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1));
        match best {
            Some((j, d)) if d <= tol => used[j] = true,
            _ => return false,
        }
    }
    true
}

/// Kuhn's augmenting-path bipartite matching on the graph `|a_i − b_j| ≤ tol`.
fn perfect_matching_within(a: &[Complex64], b: &[Complex64], tol: f64) -> bool {
    let n = a.len();
    let adj: Vec<Vec<usize>> = a
        .iter()
        .map(|x| (0..n).filter(|&j| (x - b[j]).norm() <= tol).collect())
        .collect();
    let mut owner: Vec<Option<usize>> = vec![None; n];

    fn augment(
        i: usize,
        adj: &[Vec<usize>],
        seen: &mut [bool],
        owner: &mut [Option<usize>],
    ) -> bool {
        for &j in &adj[i] {
            if seen[j] {
                continue;
            }
            seen[j] = true;
            if owner[j].is_none() || augment(owner[j].unwrap(), adj, seen, owner) {
                owner[j] = Some(i);
                return true;
            }
        }
        false
    }

    for i in 0..n {
        let mut seen = vec![false; n];
        if !augment(i, &adj, &mut seen, &mut owner) {
            return false;
        }
    }
    true
}
