//! Colors and palettes over the fixed color set `{1, 2, 3}`.

use std::fmt;

use serde::{Deserialize, Serialize};

/// One of the three colors. Always in `1..=3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct Color(u8);

impl Color {
    pub const ALL: [Color; 3] = [Color(1), Color(2), Color(3)];

    pub fn new(c: u8) -> Option<Color> {
        (1..=3).contains(&c).then_some(Color(c))
    }

    pub fn get(self) -> u8 {
        self.0
    }

    fn bit(self) -> u8 {
        1 << (self.0 - 1)
    }
}

impl TryFrom<u8> for Color {
    type Error = String;

    fn try_from(c: u8) -> Result<Self, Self::Error> {
        Color::new(c).ok_or_else(|| format!("color {c} outside 1..=3"))
    }
}

impl From<Color> for u8 {
    fn from(c: Color) -> u8 {
        c.0
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A subset of `{1, 2, 3}`, stored as a 3-bit mask.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Palette(u8);

impl Palette {
    pub const EMPTY: Palette = Palette(0);
    pub const FULL: Palette = Palette(0b111);

    pub fn from_bits(bits: u8) -> Palette {
        Palette(bits & 0b111)
    }

    pub fn bits(self) -> u8 {
        self.0
    }

    pub fn single(c: Color) -> Palette {
        Palette(c.bit())
    }

    pub fn from_colors<I: IntoIterator<Item = Color>>(colors: I) -> Palette {
        Palette(colors.into_iter().fold(0, |acc, c| acc | c.bit()))
    }

    pub fn contains(self, c: Color) -> bool {
        self.0 & c.bit() != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn without(self, c: Color) -> Palette {
        Palette(self.0 & !c.bit())
    }

    pub fn with(self, c: Color) -> Palette {
        Palette(self.0 | c.bit())
    }

    pub fn intersect(self, other: Palette) -> Palette {
        Palette(self.0 & other.0)
    }

    pub fn union(self, other: Palette) -> Palette {
        Palette(self.0 | other.0)
    }

    pub fn is_subset(self, other: Palette) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn complement(self) -> Palette {
        Palette(!self.0 & 0b111)
    }

    /// Colors in ascending order.
    pub fn iter(self) -> impl Iterator<Item = Color> {
        Color::ALL.into_iter().filter(move |c| self.contains(*c))
    }

    pub fn min(self) -> Option<Color> {
        self.iter().next()
    }

    pub fn max(self) -> Option<Color> {
        self.iter().last()
    }

    /// The only color of a singleton palette.
    pub fn as_single(self) -> Option<Color> {
        (self.len() == 1).then(|| self.min().unwrap())
    }
}

impl fmt::Debug for Palette {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, c) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Display for Palette {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromIterator<Color> for Palette {
    fn from_iter<T: IntoIterator<Item = Color>>(iter: T) -> Self {
        Palette::from_colors(iter)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: u8) -> Color {
        Color::new(x).unwrap()
    }

    #[test]
    fn color_range() {
        assert!(Color::new(0).is_none());
        assert!(Color::new(4).is_none());
        assert_eq!(Color::new(2).map(Color::get), Some(2));
    }

    #[test]
    fn palette_set_ops() {
        let p = Palette::from_colors([c(1), c(3)]);
        assert_eq!(p.len(), 2);
        assert_eq!(p.iter().collect::<Vec<_>>(), vec![c(1), c(3)]);
        assert_eq!(p.without(c(1)).as_single(), Some(c(3)));
        assert_eq!(p.complement(), Palette::single(c(2)));
        assert!(p.is_subset(Palette::FULL));
        assert!(!Palette::FULL.is_subset(p));
        assert_eq!(format!("{p:?}"), "{1,3}");
    }
}
