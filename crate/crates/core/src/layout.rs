//! Operand-grid arrangement of the partial products of `a * a`.
//!
//! Squaring an `n`-bit value needs the `n(n-1)/2` cross products `a_i a_j` (`i < j`, each
//! appearing twice in the schoolbook sum) and the diagonal terms `a_i a_i = a_i`. The grid
//! packs them into rows so that only `n/2` (even `n`) or `(n-1)/2` (odd `n`) additions are
//! needed:
//!
//! * rows `T0` and `T1` are `2n-3` wide and sit at bit position 2 of the result;
//! * row `Tk` (`k >= 2`) is `2n-2k` wide and sits at bit position `2k`;
//! * a cross product placed in column `c` of a row at position `p` contributes
//!   `2 * a_i a_j` at weight `2^(p+c)`, so it lands where `i + j = p + c - 1`.
//!
//! Bit `a_0` is the least significant result bit and never enters the grid. Every other
//! cell is zero padding.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GridEntry {
    /// `a_i * a_j`, `i < j`.
    Product(usize, usize),
    /// A copy of bit `a_i`.
    Copy(usize),
    Zero,
}

impl GridEntry {
    pub fn value(&self, a: u64) -> u64 {
        let bit = |i: usize| (a >> i) & 1;
        match *self {
            GridEntry::Product(i, j) => bit(i) & bit(j),
            GridEntry::Copy(i) => bit(i),
            GridEntry::Zero => 0,
        }
    }
}

impl fmt::Display for GridEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GridEntry::Product(i, j) => write!(f, "a{i}a{j}"),
            GridEntry::Copy(i) => write!(f, "a{i}"),
            GridEntry::Zero => f.write_str("0"),
        }
    }
}

/// Which construction phase wrote each zero cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PadCensus {
    /// Zeros placed between products while the columns are filled.
    pub interior: usize,
    /// Zeros loaded at the high end of rows `T2..` afterwards.
    pub left: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperandGrid {
    n: usize,
    rows: Vec<Vec<GridEntry>>,
    pads: PadCensus,
}

impl OperandGrid {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[Vec<GridEntry>] {
        &self.rows
    }

    pub fn row(&self, k: usize) -> &[GridEntry] {
        &self.rows[k]
    }

    pub fn cell(&self, row: usize, col: usize) -> Option<GridEntry> {
        self.rows.get(row).and_then(|r| r.get(col)).copied()
    }

    pub fn pad_census(&self) -> PadCensus {
        self.pads
    }

    /// Index of the last row; equals the number of additions.
    pub fn last_row(&self) -> usize {
        self.rows.len() - 1
    }

    /// Result bit position of column 0 of row `k`.
    pub fn row_offset(k: usize) -> usize {
        if k < 2 {
            2
        } else {
            2 * k
        }
    }

    /// Adder widths in cascade order: `T0 + T1`, then `V + Tk` for `k >= 2`.
    pub fn adder_widths(&self) -> Vec<usize> {
        std::iter::once(self.rows[0].len())
            .chain(self.rows[2..].iter().map(Vec::len))
            .collect()
    }

    /// One row per line, cells comma-separated.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

pub fn check_width(n: usize) -> Result<()> {
    if n > 4 {
        Ok(())
    } else {
        Err(Error::UnsupportedWidth(n))
    }
}

/// All grid sources: every `a_i a_j` with `i < j` (row-major in `i`), then copies of
/// `a_1..a_{n-1}`.
pub fn partial_product_set(n: usize) -> Result<Vec<GridEntry>> {
    check_width(n)?;
    let products = (0..n).flat_map(|i| (i + 1..n).map(move |j| GridEntry::Product(i, j)));
    let copies = (1..n).map(GridEntry::Copy);
    Ok(products.chain(copies).collect())
}

/// Number of rows beyond `T0`: `n/2` for even `n`, `(n-1)/2` for odd `n`.
pub fn row_count(n: usize) -> usize {
    n / 2
}

struct Builder {
    cells: Vec<Vec<Option<GridEntry>>>,
    pads: PadCensus,
}

#[derive(Clone, Copy)]
enum Phase {
    Fill,
    Left,
}

impl Builder {
    fn new(n: usize) -> Self {
        let last = row_count(n);
        let cells = (0..=last)
            .map(|k| {
                let width = if k < 2 { 2 * n - 3 } else { 2 * n - 2 * k };
                vec![None; width]
            })
            .collect();
        Builder {
            cells,
            pads: PadCensus::default(),
        }
    }

    fn put(&mut self, row: usize, col: isize, entry: GridEntry, phase: Phase) -> Result<()> {
        let oob = || Error::CellOutOfRange {
            row,
            col: col.max(0) as usize,
        };
        let col = usize::try_from(col).map_err(|_| oob())?;
        let slot = self
            .cells
            .get_mut(row)
            .and_then(|r| r.get_mut(col))
            .ok_or_else(oob)?;
        if let Some(existing) = slot {
            return Err(Error::CellOverwrite {
                row,
                col,
                existing: existing.to_string(),
                new: entry.to_string(),
            });
        }
        *slot = Some(entry);
        if entry == GridEntry::Zero {
            match phase {
                Phase::Fill => self.pads.interior += 1,
                Phase::Left => self.pads.left += 1,
            }
        }
        Ok(())
    }

    fn finish(self, n: usize) -> Result<OperandGrid> {
        let mut rows = Vec::with_capacity(self.cells.len());
        for (row, cells) in self.cells.into_iter().enumerate() {
            let mut out = Vec::with_capacity(cells.len());
            for (col, c) in cells.into_iter().enumerate() {
                out.push(c.ok_or(Error::CellUnassigned { row, col })?);
            }
            rows.push(out);
        }
        Ok(OperandGrid {
            n,
            rows,
            pads: self.pads,
        })
    }
}

/// Builds the operand grid column by column (`i` walks result positions 3..2n-1, i.e. grid
/// columns `i-1` of rows `T0`/`T1`), then loads the left-side zero padding.
///
/// Every cell is written exactly once; a second write or a cell left empty is an error.
pub fn arrange(n: usize) -> Result<OperandGrid> {
    check_width(n)?;
    let mut g = Builder::new(n);
    let pp = GridEntry::Product;
    let zero = GridEntry::Zero;
    let ni = n as isize;
    let odd_n = n % 2 == 1;

    for i in 1..=(2 * ni - 3) {
        let odd = i % 2 == 1;
        let low = i < ni;
        let fill = Phase::Fill;
        match (low, odd) {
            (true, true) => {
                let h = (i + 1) / 2;
                g.put(0, i - 1, GridEntry::Copy(h as usize), fill)?;
                g.put(1, i - 1, pp(0, i as usize), fill)?;
                for j in 2..=h {
                    g.put(
                        j as usize,
                        i - 2 * j + 1,
                        pp((j - 1) as usize, (i - j + 1) as usize),
                        fill,
                    )?;
                }
            }
            (true, false) => {
                for j in 1..=i / 2 {
                    let col = if j <= 2 { i - 1 } else { i - 2 * j + 3 };
                    g.put(
                        (j - 1) as usize,
                        col,
                        pp((j - 1) as usize, (i - j + 1) as usize),
                        fill,
                    )?;
                }
                g.put((i / 2) as usize, 1, zero, fill)?;
            }
            (false, true) => {
                let h = (i + 1) / 2;
                g.put(0, i - 1, GridEntry::Copy(h as usize), fill)?;
                g.put(1, i - 1, pp((i - ni + 1) as usize, n - 1), fill)?;
                if i != 2 * ni - 3 {
                    for j in 2..=(2 * ni - i - 1) / 2 {
                        g.put(
                            j as usize,
                            i - 2 * j + 1,
                            pp((i - ni + j) as usize, (ni - j) as usize),
                            fill,
                        )?;
                    }
                }
            }
            (false, false) => {
                for j in 1..=(2 * ni - i - 2) / 2 {
                    let col = if j <= 2 { i - 1 } else { i - 2 * j + 3 };
                    g.put(
                        (j - 1) as usize,
                        col,
                        pp((i - ni + j) as usize, (ni - j) as usize),
                        fill,
                    )?;
                }
                let upper = ((2 * ni - i - 2) / 2) as usize;
                let lower = ((2 * ni - i) / 2) as usize;
                let (cu, cl) = if i == 2 * ni - 4 {
                    (i - 1, i - 3)
                } else if !odd_n && i == ni {
                    (3, 1)
                } else {
                    (2 * (i - ni) + 3, 2 * (i - ni) + 1)
                };
                g.put(upper, cu, zero, fill)?;
                g.put(lower, cl, zero, fill)?;
            }
        }
    }

    let left_rows = if odd_n { (ni - 3) / 2 } else { (ni - 2) / 2 };
    for i in 1..=left_rows {
        for j in 1..=2 * i {
            g.put((i + 1) as usize, 2 * ni - 3 - 4 * i + j, zero, Phase::Left)?;
        }
    }

    g.finish(n)
}

/// Evaluates the grid for input `a`: `a_0 + 4 (T0 + T1) + sum_{k >= 2} 4^k Tk`.
pub fn grid_value(grid: &OperandGrid, a: u64) -> u128 {
    let row_value = |row: &[GridEntry]| -> u128 {
        row.iter()
            .enumerate()
            .map(|(c, e)| (e.value(a) as u128) << c)
            .sum()
    };
    let mut total = (a & 1) as u128;
    for (k, row) in grid.rows().iter().enumerate() {
        total += row_value(row) << OperandGrid::row_offset(k);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use GridEntry::{Copy as C, Product as P, Zero as Z};

    #[test]
    fn source_counts() {
        let five = partial_product_set(5).unwrap();
        assert_eq!(five.iter().filter(|e| matches!(e, P(..))).count(), 10);
        assert_eq!(five.iter().filter(|e| matches!(e, C(_))).count(), 4);
        let six = partial_product_set(6).unwrap();
        assert_eq!(six.iter().filter(|e| matches!(e, P(..))).count(), 15);
        assert_eq!(six.iter().filter(|e| matches!(e, C(_))).count(), 5);
        assert_eq!(partial_product_set(4), Err(Error::UnsupportedWidth(4)));
        assert_eq!(arrange(4), Err(Error::UnsupportedWidth(4)));
    }

    #[test]
    fn six_bit_grid_matches_reference_layout() {
        let g = arrange(6).unwrap();
        assert_eq!(
            g.row(0),
            &[
                C(1),
                P(0, 2),
                C(2),
                P(0, 4),
                C(3),
                P(1, 5),
                C(4),
                P(3, 5),
                C(5)
            ]
        );
        assert_eq!(
            g.row(1),
            &[
                P(0, 1),
                Z,
                P(0, 3),
                P(1, 3),
                P(0, 5),
                P(2, 4),
                P(2, 5),
                Z,
                P(4, 5)
            ]
        );
        assert_eq!(g.row(2), &[P(1, 2), Z, P(1, 4), Z, P(3, 4), Z, Z, Z]);
        assert_eq!(g.row(3), &[P(2, 3), Z, Z, Z, Z, Z]);
        assert_eq!(g.adder_widths(), vec![9, 8, 6]);
    }

    #[test]
    fn five_bit_grid() {
        let g = arrange(5).unwrap();
        assert_eq!(
            g.dump(),
            "a1,a0a2,a2,a0a4,a3,a2a4,a4\na0a1,0,a0a3,a1a3,a1a4,0,a3a4\na1a2,0,a2a3,0,0,0\n"
        );
        assert_eq!(g.adder_widths(), vec![7, 6]);
    }

    #[test]
    fn dump_format() {
        let dump = arrange(6).unwrap().dump();
        let mut lines = dump.lines();
        assert_eq!(lines.next(), Some("a1,a0a2,a2,a0a4,a3,a1a5,a4,a3a5,a5"));
        assert!(lines.next().unwrap().starts_with("a0a1,0,"));
    }

    #[test]
    fn small_values() {
        for n in 5..9 {
            let g = arrange(n).unwrap();
            assert_eq!(grid_value(&g, 0), 0);
            assert_eq!(grid_value(&g, 1), 1);
        }
        assert_eq!(grid_value(&arrange(6).unwrap(), 63), 3969);
    }

    #[test]
    #[allow(clippy::manual_div_ceil)]
    fn pad_counts_follow_closed_forms() {
        for n in 5..=16 {
            let p = arrange(n).unwrap().pad_census();
            let (interior, left) = if n % 2 == 0 {
                ((3 * n - 6) / 2, (n * n - 2 * n) / 4)
            } else {
                ((3 * n - 7) / 2, (n * n - 4 * n + 3) / 4)
            };
            assert_eq!((p.interior, p.left), (interior, left), "n={n}");
        }
    }

    #[test]
    fn widths_follow_size_series() {
        for n in 5..=16 {
            let g = arrange(n).unwrap();
            let last = if n % 2 == 0 { (n - 4) / 2 } else { (n - 5) / 2 };
            let mut expected = vec![2 * n - 3];
            expected.extend((0..=last).map(|i| 2 * n - 4 - 2 * i));
            assert_eq!(g.adder_widths(), expected, "n={n}");
            assert_eq!(g.last_row(), row_count(n));
        }
    }
}
