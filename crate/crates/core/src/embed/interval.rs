//! Exact arithmetic on finite unions of half-open rational subintervals
//! of [0,1) with a common power-of-four denominator.

use crate::error::{Error, Result};
use crate::report::Rat;

/// Finite union of disjoint half-open intervals [p/g, q/g), kept in the
/// unique normal form: sorted, maximally merged, 0 <= p < q <= g. The
/// denominator g is always a power of 4.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntervalSet {
    den: u64,
    cells: Vec<(u64, u64)>,
}

fn assert_power_of_four(den: u64) {
    assert!(den > 0 && den.is_power_of_two() && den.trailing_zeros() % 2 == 0,
        "interval denominator {den} is not a power of four");
}

impl IntervalSet {
    pub fn empty(den: u64) -> Self {
        assert_power_of_four(den);
        IntervalSet { den, cells: Vec::new() }
    }

    pub fn full(den: u64) -> Self {
        assert_power_of_four(den);
        IntervalSet { den, cells: vec![(0, den)] }
    }

    /// Normalize arbitrary (possibly overlapping, unsorted) cells.
    pub fn from_cells(den: u64, mut cells: Vec<(u64, u64)>) -> Result<Self> {
        assert_power_of_four(den);
        for &(p, q) in &cells {
            if p >= q || q > den {
                return Err(Error::Validation(format!(
                    "bad interval cell [{p},{q}) over denominator {den}"
                )));
            }
        }
        cells.sort_unstable();
        let mut merged: Vec<(u64, u64)> = Vec::with_capacity(cells.len());
        for (p, q) in cells {
            match merged.last_mut() {
                Some(last) if p <= last.1 => last.1 = last.1.max(q),
                _ => merged.push((p, q)),
            }
        }
        Ok(IntervalSet { den, cells: merged })
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn cells(&self) -> &[(u64, u64)] {
        &self.cells
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn measure(&self) -> Rat {
        let total: u64 = self.cells.iter().map(|&(p, q)| q - p).sum();
        Rat::new(total as i64, self.den as i64)
    }

    /// Re-express over a larger denominator (same point set).
    pub fn rescale(&self, new_den: u64) -> Result<Self> {
        assert_power_of_four(new_den);
        if new_den % self.den != 0 {
            return Err(Error::Validation(format!(
                "cannot rescale denominator {} to {new_den}",
                self.den
            )));
        }
        let k = new_den / self.den;
        Ok(IntervalSet {
            den: new_den,
            cells: self.cells.iter().map(|&(p, q)| (p * k, q * k)).collect(),
        })
    }

    /// The set s/4 over denominator 4g: same numerators, scaled meaning.
    pub fn scale_quarter(&self) -> Self {
        IntervalSet { den: self.den * 4, cells: self.cells.clone() }
    }

    /// Translate right by `offset` numerator units.
    pub fn shift(&self, offset: u64) -> Result<Self> {
        for &(_, q) in &self.cells {
            if q + offset > self.den {
                return Err(Error::Validation(format!(
                    "shift by {offset} leaves [0,1): cell end {q} over {}",
                    self.den
                )));
            }
        }
        Ok(IntervalSet {
            den: self.den,
            cells: self.cells.iter().map(|&(p, q)| (p + offset, q + offset)).collect(),
        })
    }

    fn aligned(&self, other: &IntervalSet) -> (IntervalSet, IntervalSet) {
        let den = self.den.max(other.den);
        (
            self.rescale(den).expect("powers of four are nested"),
            other.rescale(den).expect("powers of four are nested"),
        )
    }

    pub fn union(&self, other: &IntervalSet) -> Self {
        let (a, b) = self.aligned(other);
        let mut cells = a.cells;
        cells.extend(b.cells);
        IntervalSet::from_cells(a.den, cells).expect("aligned cells are valid")
    }

    pub fn intersect(&self, other: &IntervalSet) -> Self {
        let (a, b) = self.aligned(other);
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < a.cells.len() && j < b.cells.len() {
            let (p1, q1) = a.cells[i];
            let (p2, q2) = b.cells[j];
            let lo = p1.max(p2);
            let hi = q1.min(q2);
            if lo < hi {
                out.push((lo, hi));
            }
            if q1 <= q2 {
                i += 1;
            } else {
                j += 1;
            }
        }
        IntervalSet { den: a.den, cells: out }
    }

    /// measure(self Δ other), exact: |A| + |B| − 2|A ∩ B|.
    pub fn symm_diff_measure(&self, other: &IntervalSet) -> Rat {
        self.measure() + other.measure()
            - Rat::from_integer(2) * self.intersect(other).measure()
    }

    /// Spread a set of denominator g uniformly over every cell of the
    /// 1/g grid: returns the union of (u + s)/g for u = 0..g, over
    /// denominator g^2.
    ///
    /// The result is independent of s's position within [0,1): for any t
    /// whose denominator divides g, measure(t ∩ tile(s)) =
    /// measure(t) · measure(s). This realizes the second coordinate of
    /// the measure-preserving product-square map.
    pub fn tile(&self) -> Self {
        let g = self.den;
        let mut cells = Vec::with_capacity(self.cells.len() * g as usize);
        for u in 0..g {
            for &(p, q) in &self.cells {
                cells.push((u * g + p, u * g + q));
            }
        }
        IntervalSet::from_cells(g * g, cells).expect("tiled cells are valid")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quarters(cells: &[(u64, u64)]) -> IntervalSet {
        IntervalSet::from_cells(4, cells.to_vec()).unwrap()
    }

    #[test]
    fn normal_form_merges_and_sorts() {
        let s = IntervalSet::from_cells(16, vec![(8, 12), (0, 4), (4, 8)]).unwrap();
        assert_eq!(s.cells(), &[(0, 12)]);
        let t = IntervalSet::from_cells(16, vec![(0, 6), (4, 8), (10, 12)]).unwrap();
        assert_eq!(t.cells(), &[(0, 8), (10, 12)]);
    }

    #[test]
    fn rejects_bad_cells() {
        assert!(IntervalSet::from_cells(4, vec![(2, 2)]).is_err());
        assert!(IntervalSet::from_cells(4, vec![(3, 5)]).is_err());
    }

    #[test]
    fn measure_and_symm_diff() {
        let a = quarters(&[(0, 2)]); // [0, 1/2)
        let b = quarters(&[(1, 3)]); // [1/4, 3/4)
        assert_eq!(a.measure(), Rat::new(1, 2));
        assert_eq!(a.symm_diff_measure(&b), Rat::new(1, 2));
        assert_eq!(a.symm_diff_measure(&a), Rat::new(0, 1));
        let empty = IntervalSet::empty(4);
        assert_eq!(empty.symm_diff_measure(&IntervalSet::full(4)), Rat::new(1, 1));
    }

    #[test]
    fn symm_diff_across_denominators() {
        let a = quarters(&[(0, 1)]);
        let b = IntervalSet::from_cells(16, vec![(2, 6)]).unwrap(); // [1/8, 3/8)
        assert_eq!(a.symm_diff_measure(&b), Rat::new(1, 4));
    }

    #[test]
    fn tile_of_quarter() {
        let s = quarters(&[(0, 1)]);
        let t = s.tile();
        assert_eq!(t.den(), 16);
        assert_eq!(t.cells(), &[(0, 1), (4, 5), (8, 9), (12, 13)]);
        // Independence against [0, 1/2).
        let h = quarters(&[(0, 2)]);
        assert_eq!(t.intersect(&h).measure(), Rat::new(1, 8));
    }

    #[test]
    fn tile_of_trivial_sets() {
        assert_eq!(IntervalSet::full(4).tile(), IntervalSet::full(16));
        assert_eq!(IntervalSet::empty(4).tile(), IntervalSet::empty(16));
    }

    #[test]
    fn tile_preserves_measure() {
        let s = quarters(&[(1, 2), (3, 4)]);
        assert_eq!(s.tile().measure(), s.measure());
    }

    #[test]
    fn shift_checks_bounds() {
        let s = quarters(&[(2, 4)]);
        assert!(s.shift(1).is_err());
        assert_eq!(quarters(&[(0, 2)]).shift(2).unwrap().cells(), &[(2, 4)]);
    }
}
