//! Single-word occupancy grids.
//!
//! A 64-bit word encodes an 8×8 grid row-major: bit `(y-1)*8 + (x-1)`.
//! Dominance queries mask away columns right of `x` and rows below `y`,
//! then take the lowest set bit.

use crate::error::{Error, Result};

/// Side of the square grid held by one word.
pub const SIDE: u32 = 8;

const LOW_COLUMN: u64 = 0x0101_0101_0101_0101;

pub fn word_encode(points: &[(u32, u32)]) -> Result<u64> {
    let mut w = 0u64;
    for &(x, y) in points {
        for c in [x, y] {
            if !(1..=SIDE).contains(&c) {
                return Err(Error::CoordinateOutOfRange(c as u64));
            }
        }
        w |= 1u64 << ((y - 1) * SIDE + (x - 1));
    }
    Ok(w)
}

/// Mask of cells with column `<= cols` and row `>= first_row` (1-based);
/// `cols` in `0..=8`, `first_row` in `1..=8`.
#[inline]
pub(crate) fn dominance_mask(cols: u32, first_row: u32) -> u64 {
    let col = if cols >= SIDE { 0xFF } else { (1u64 << cols) - 1 };
    (col * LOW_COLUMN) & (!0u64 << ((first_row - 1) * SIDE))
}

/// Point `(x', y')` of the word with `x' <= x`, `y' >= y` and minimal `y'`
/// (then minimal `x'`).
pub fn word_query(word: u64, x: u32, y: u32) -> Option<(u32, u32)> {
    if x == 0 || y > SIDE {
        return None;
    }
    let hit = word & dominance_mask(x.min(SIDE), y.max(1));
    (hit != 0).then(|| {
        let b = hit.trailing_zeros();
        (b % SIDE + 1, b / SIDE + 1)
    })
}

/// Lane-parallel `lane <= v` test over eight 16-bit lanes of a `u128`.
/// Lanes and `v` must stay below `0x8000`; returns a bitmask of lanes.
#[inline]
pub(crate) fn lanes_le(lanes: u128, v: u32) -> u8 {
    const H: u128 = 0x8000_8000_8000_8000_8000_8000_8000_8000;
    const ONE: u128 = 0x0001_0001_0001_0001_0001_0001_0001_0001;
    let t = ((v as u128 * ONE) | H).wrapping_sub(lanes) & H;
    // gather the eight high bits
    let mut out = 0u8;
    let mut t = t >> 15;
    for i in 0..8 {
        out |= ((t & 1) as u8) << i;
        t >>= 16;
    }
    out
}

pub(crate) fn pack_lanes(vals: impl IntoIterator<Item = u32>, fill: u32) -> u128 {
    let mut out = 0u128;
    let mut k = 0;
    for v in vals {
        debug_assert!(v < 0x8000);
        out |= (v as u128) << (16 * k);
        k += 1;
    }
    for j in k..8 {
        out |= (fill as u128) << (16 * j);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn brute(points: &[(u32, u32)], x: u32, y: u32) -> Option<(u32, u32)> {
        points.iter().copied().filter(|&(a, b)| a <= x && b >= y).min_by_key(|&(a, b)| (b, a))
    }

    #[test]
    fn empty_and_single() {
        assert_eq!(word_query(0, 8, 1), None);
        let w = word_encode(&[(1, 2)]).unwrap();
        assert_eq!(word_query(w, 1, 1), Some((1, 2)));
        assert_eq!(word_query(w, 0, 1), None);
        assert!(word_encode(&[(9, 1)]).is_err());
    }

    #[test]
    fn random_sets_exhaustive() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..500 {
            let k = rng.gen_range(0..20);
            let pts: Vec<(u32, u32)> = (0..k).map(|_| (rng.gen_range(1..=8), rng.gen_range(1..=8))).collect();
            let w = word_encode(&pts).unwrap();
            for x in 0..=8 {
                for y in 1..=9 {
                    assert_eq!(word_query(w, x, y), brute(&pts, x, y), "{pts:?} {x} {y}");
                }
            }
        }
    }

    #[test]
    fn lane_compare() {
        let lanes = pack_lanes([0, 5, 10, 0x7FFE], 0x7FFF);
        assert_eq!(lanes_le(lanes, 5), 0b0000_0011);
        assert_eq!(lanes_le(lanes, 0x7FFE), 0b0000_1111);
        assert_eq!(lanes_le(lanes, 0), 0b0000_0001);
    }
}
