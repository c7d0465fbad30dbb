use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};

/// A finite bit sequence. Position 0 is `x₁` (or `y₁`).
///
/// Lexicographic order treats position 0 as the most significant bit, so
/// the derived `Ord` on the underlying vector is exactly the string order
/// with `0 < 1`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct BitString(Vec<bool>);

impl BitString {
    pub fn new(bits: Vec<bool>) -> Self {
        BitString(bits)
    }

    pub fn zeros(len: usize) -> Self {
        BitString(vec![false; len])
    }

    /// Assignment number `index` under the truth-table encoding: `xⱼ` is bit
    /// `j − 1` of `index`.
    pub fn from_index(index: u64, len: usize) -> Self {
        BitString(
            (0..len)
                .map(|j| j < 64 && (index >> j) & 1 == 1)
                .collect(),
        )
    }

    /// Inverse of [`BitString::from_index`]; `None` past 64 bits.
    pub fn to_index(&self) -> Option<u64> {
        if self.0.len() > 64 {
            return None;
        }
        Some(
            self.0
                .iter()
                .enumerate()
                .fold(0u64, |acc, (j, &b)| acc | ((b as u64) << j)),
        )
    }

    /// The `rank`-th string of length `len` in lexicographic order (position
    /// 0 most significant).
    pub fn from_lex_rank(rank: u64, len: usize) -> Self {
        BitString(
            (0..len)
                .map(|p| {
                    let shift = len - 1 - p;
                    shift < 64 && (rank >> shift) & 1 == 1
                })
                .collect(),
        )
    }

    pub fn lex_rank(&self) -> Option<u64> {
        if self.0.len() > 64 {
            return None;
        }
        Some(self.0.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64))
    }

    pub fn random<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Self {
        let mut bits = Vec::with_capacity(len);
        while bits.len() < len {
            let word: u64 = rng.random();
            let take = (len - bits.len()).min(64);
            bits.extend((0..take).map(|j| (word >> j) & 1 == 1));
        }
        BitString(bits)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn get(&self, i: usize) -> bool {
        self.0[i]
    }

    pub fn slice(&self, start: usize, len: usize) -> BitString {
        BitString(self.0[start..start + len].to_vec())
    }

    pub fn concat(parts: &[BitString]) -> BitString {
        BitString(parts.iter().flat_map(|p| p.0.iter().copied()).collect())
    }

    pub fn into_inner(self) -> Vec<bool> {
        self.0
    }
}

impl From<Vec<bool>> for BitString {
    fn from(bits: Vec<bool>) -> Self {
        BitString(bits)
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::param(format!("`{other}` is not a bit in `{s}`"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(BitString)
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({self})")
    }
}

/// Truth table of an `n`-variate Boolean function. `bits[i]` is the value on
/// the assignment where `xⱼ` is bit `j − 1` of `i`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruthTable {
    vars: usize,
    bits: Vec<bool>,
}

/// Largest variable count a table may have; keeps `2ⁿ` addressable.
pub const MAX_TABLE_VARS: usize = 30;

impl TruthTable {
    pub fn new(vars: usize, bits: Vec<bool>) -> Result<Self> {
        if vars > MAX_TABLE_VARS {
            return Err(Error::param(format!("{vars} variables is too many for a truth table")));
        }
        if bits.len() != 1usize << vars {
            return Err(Error::param(format!(
                "truth table over {vars} variables needs {} bits, got {}",
                1usize << vars,
                bits.len()
            )));
        }
        Ok(TruthTable { vars, bits })
    }

    /// Parses a bit string whose length must be a power of two.
    pub fn parse(s: &str) -> Result<Self> {
        let bits = s.parse::<BitString>()?.into_inner();
        let len = bits.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(Error::param(format!(
                "truth table length {len} is not a power of two"
            )));
        }
        TruthTable::new(len.trailing_zeros() as usize, bits)
    }

    pub fn from_fn(vars: usize, f: impl Fn(u64) -> bool) -> Result<Self> {
        if vars > MAX_TABLE_VARS {
            return Err(Error::param(format!("{vars} variables is too many for a truth table")));
        }
        TruthTable::new(vars, (0..1u64 << vars).map(f).collect())
    }

    /// Table from a packed mask (bit `i` of `mask` is `bits[i]`), `vars ≤ 6`.
    pub fn from_mask(vars: usize, mask: u64) -> Result<Self> {
        if vars > 6 {
            return Err(Error::param("mask tables support at most 6 variables"));
        }
        TruthTable::from_fn(vars, |i| (mask >> i) & 1 == 1)
    }

    /// Packed form for `vars ≤ 6`.
    pub fn to_mask(&self) -> Option<u64> {
        if self.vars > 6 {
            return None;
        }
        Some(
            self.bits
                .iter()
                .enumerate()
                .fold(0u64, |acc, (i, &b)| acc | ((b as u64) << i)),
        )
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn get(&self, index: usize) -> bool {
        self.bits[index]
    }
}

impl fmt::Display for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruthTable({}; {self})", self.vars)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_encoding_is_lsb_first() {
        assert_eq!(BitString::from_index(1, 3).to_string(), "100");
        assert_eq!(BitString::from_index(6, 3).to_string(), "011");
        assert_eq!("011".parse::<BitString>().unwrap().to_index(), Some(6));
    }

    #[test]
    fn lex_rank_is_msb_first() {
        assert_eq!(BitString::from_lex_rank(1, 3).to_string(), "001");
        assert_eq!(BitString::from_lex_rank(6, 3).to_string(), "110");
        assert_eq!("110".parse::<BitString>().unwrap().lex_rank(), Some(6));
        let a: BitString = "011".parse().unwrap();
        let b: BitString = "100".parse().unwrap();
        assert!(a < b);
    }

    #[test]
    fn table_parse_rejects_bad_lengths() {
        assert!(TruthTable::parse("011").is_err());
        assert!(TruthTable::parse("").is_err());
        assert!(TruthTable::parse("01a1").is_err());
        let t = TruthTable::parse("0110").unwrap();
        assert_eq!(t.vars(), 2);
        assert_eq!(t.to_mask(), Some(0b0110));
        assert_eq!(TruthTable::from_mask(2, 0b0110).unwrap(), t);
    }

    #[test]
    fn random_bits_have_requested_length() {
        let mut rng = crate::seed::rng(3);
        for len in [0, 1, 63, 64, 65, 200] {
            assert_eq!(BitString::random(len, &mut rng).len(), len);
        }
    }
}
