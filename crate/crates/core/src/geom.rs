//! Small geometry and color types shared by every module.

use std::ops::{Add, AddAssign, Div, Mul, Sub};

use crate::scalar::Real;

/// Integer texel coordinates (may be out of texture bounds; clamping is the
/// texture module's job).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct IVec2 {
    pub x: i32,
    pub y: i32,
}

pub const fn ivec2(x: i32, y: i32) -> IVec2 {
    IVec2 { x, y }
}

impl IVec2 {
    pub fn min(self, o: IVec2) -> IVec2 {
        ivec2(self.x.min(o.x), self.y.min(o.y))
    }

    pub fn max(self, o: IVec2) -> IVec2 {
        ivec2(self.x.max(o.x), self.y.max(o.y))
    }
}

/// Row-major ordering (y first, then x). This matches the enumeration order
/// of set bits in a row-major texel bitmask, so sorted coordinate lists and
/// bitmask enumeration agree everywhere.
impl Ord for IVec2 {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.y, self.x).cmp(&(other.y, other.x))
    }
}

impl PartialOrd for IVec2 {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for IVec2 {
    type Output = IVec2;
    fn add(self, o: IVec2) -> IVec2 {
        ivec2(self.x + o.x, self.y + o.y)
    }
}

impl Sub for IVec2 {
    type Output = IVec2;
    fn sub(self, o: IVec2) -> IVec2 {
        ivec2(self.x - o.x, self.y - o.y)
    }
}

/// Linear RGBA color.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Rgba<S> {
    pub r: S,
    pub g: S,
    pub b: S,
    pub a: S,
}

impl<S: Real> Rgba<S> {
    pub fn new(r: S, g: S, b: S, a: S) -> Self {
        Rgba { r, g, b, a }
    }

    pub fn splat(v: S) -> Self {
        Rgba::new(v, v, v, v)
    }

    pub fn zero() -> Self {
        Rgba::splat(S::zero())
    }

    pub fn channel(&self, c: usize) -> S {
        match c {
            0 => self.r,
            1 => self.g,
            2 => self.b,
            3 => self.a,
            _ => panic!("channel index {c} out of range"),
        }
    }

    pub fn set_channel(&mut self, c: usize, v: S) {
        match c {
            0 => self.r = v,
            1 => self.g = v,
            2 => self.b = v,
            3 => self.a = v,
            _ => panic!("channel index {c} out of range"),
        }
    }

    pub fn max_abs_diff(&self, o: &Rgba<S>) -> S {
        let d = |a: S, b: S| (a - b).abs();
        d(self.r, o.r)
            .max(d(self.g, o.g))
            .max(d(self.b, o.b))
            .max(d(self.a, o.a))
    }

    pub fn cast<T: Real>(&self) -> Rgba<T> {
        Rgba::new(
            T::of(self.r.as_f64()),
            T::of(self.g.as_f64()),
            T::of(self.b.as_f64()),
            T::of(self.a.as_f64()),
        )
    }
}

impl<S: Real> Add for Rgba<S> {
    type Output = Rgba<S>;
    fn add(self, o: Rgba<S>) -> Rgba<S> {
        Rgba::new(self.r + o.r, self.g + o.g, self.b + o.b, self.a + o.a)
    }
}

impl<S: Real> AddAssign for Rgba<S> {
    fn add_assign(&mut self, o: Rgba<S>) {
        *self = *self + o;
    }
}

impl<S: Real> Sub for Rgba<S> {
    type Output = Rgba<S>;
    fn sub(self, o: Rgba<S>) -> Rgba<S> {
        Rgba::new(self.r - o.r, self.g - o.g, self.b - o.b, self.a - o.a)
    }
}

impl<S: Real> Mul<S> for Rgba<S> {
    type Output = Rgba<S>;
    fn mul(self, k: S) -> Rgba<S> {
        Rgba::new(self.r * k, self.g * k, self.b * k, self.a * k)
    }
}

impl<S: Real> Div<S> for Rgba<S> {
    type Output = Rgba<S>;
    fn div(self, k: S) -> Rgba<S> {
        Rgba::new(self.r / k, self.g / k, self.b / k, self.a / k)
    }
}

/// Anything a lane can produce and filter: closed under addition and
/// scaling by a filter weight.
pub trait Sample<S: Real>:
    Copy + Default + Add<Output = Self> + AddAssign + Mul<S, Output = Self>
{
}

impl<S: Real, T> Sample<S> for T where
    T: Copy + Default + Add<Output = T> + AddAssign + Mul<S, Output = T>
{
}
