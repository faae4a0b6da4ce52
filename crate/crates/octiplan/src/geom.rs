//! Exact grid points and octilinear slopes.

use crate::scalar::CoordNum;

/// Grid point with exact integer coordinates.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pt<T> {
    pub x: T,
    pub y: T,
}

impl<T: std::fmt::Display> std::fmt::Debug for Pt<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl<T: CoordNum> Pt<T> {
    pub fn new(x: T, y: T) -> Self {
        Pt { x, y }
    }

    pub fn of(x: i64, y: i64) -> Self {
        Pt::new(T::from_i64c(x), T::from_i64c(y))
    }

    pub fn add(&self, dx: &T, dy: &T) -> Self {
        Pt::new(self.x.clone() + dx.clone(), self.y.clone() + dy.clone())
    }

    pub fn shift(&self, dx: i64, dy: i64) -> Self {
        self.add(&T::from_i64c(dx), &T::from_i64c(dy))
    }
}

/// Slope class of an octilinear segment.
///
/// `DiagUp` runs south-west to north-east (dy = dx), `DiagDown` north-west to
/// south-east (dy = -dx), irrespective of segment direction.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum Slope {
    Horizontal,
    Vertical,
    DiagUp,
    DiagDown,
}

/// Slope of the segment a-b, or None for zero-length or non-octilinear.
pub fn slope_of<T: CoordNum>(a: &Pt<T>, b: &Pt<T>) -> Option<Slope> {
    let dx = b.x.clone() - a.x.clone();
    let dy = b.y.clone() - a.y.clone();
    if dx.is_zero() && dy.is_zero() {
        None
    } else if dy.is_zero() {
        Some(Slope::Horizontal)
    } else if dx.is_zero() {
        Some(Slope::Vertical)
    } else if dx == dy {
        Some(Slope::DiagUp)
    } else if dx == -dy.clone() {
        Some(Slope::DiagDown)
    } else {
        None
    }
}

/// Sign of a scalar as -1, 0, or 1.
pub fn sign<T: CoordNum>(v: &T) -> i8 {
    if v.is_zero() {
        0
    } else if v.is_positive() {
        1
    } else {
        -1
    }
}

/// Direction of the segment a-b as coordinate signs (sx, sy).
pub fn step_signs<T: CoordNum>(a: &Pt<T>, b: &Pt<T>) -> (i8, i8) {
    let dx = b.x.clone() - a.x.clone();
    let dy = b.y.clone() - a.y.clone();
    (sign(&dx), sign(&dy))
}

#[cfg(test)]
mod tests {
    use super::*;

    type P = Pt<i64>;

    #[test]
    fn slopes() {
        assert_eq!(slope_of(&P::of(0, 0), &P::of(5, 0)), Some(Slope::Horizontal));
        assert_eq!(slope_of(&P::of(2, 1), &P::of(2, -4)), Some(Slope::Vertical));
        assert_eq!(slope_of(&P::of(0, 0), &P::of(3, 3)), Some(Slope::DiagUp));
        assert_eq!(slope_of(&P::of(0, 0), &P::of(-2, -2)), Some(Slope::DiagUp));
        assert_eq!(slope_of(&P::of(0, 0), &P::of(4, -4)), Some(Slope::DiagDown));
        assert_eq!(slope_of(&P::of(0, 0), &P::of(2, 1)), None);
        assert_eq!(slope_of(&P::of(1, 1), &P::of(1, 1)), None);
    }

    #[test]
    fn signs() {
        assert_eq!(step_signs(&P::of(0, 0), &P::of(9, -1)), (1, -1));
        assert_eq!(step_signs(&P::of(3, 3), &P::of(3, 3)), (0, 0));
    }
}
