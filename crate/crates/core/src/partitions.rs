//! Partitions of subsystem labels `{1..N}`: construction, enumeration of
//! bipartitions and one-vs-rest families, coarse graining of dimension
//! lists, and the text grammar `block ("|" block)*`, `block = index ("," index)*`.
//!
//! Blocks keep the order they were given in: `3|1,2` and `1,2|3` describe
//! the same split but different views of it (which block leads determines
//! the row side of the realigned matrix). [`Partition::canonical`] collapses
//! a partition to the representative with blocks sorted by their minimum
//! element; enumeration functions emit canonical values.

use std::fmt;

use itertools::Itertools;

use crate::error::{Error, Result};

/// Ordered list of disjoint, nonempty blocks of 1-based subsystem labels
/// covering `{1..N}`. Labels inside a block are always sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    blocks: Vec<Vec<usize>>,
    n_subsystems: usize,
}

impl Partition {
    /// Validate blocks over `{1..n}`; block order is preserved, labels
    /// inside each block are sorted.
    pub fn new(blocks: Vec<Vec<usize>>, n: usize) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::Partition("no blocks given".into()));
        }
        let mut seen = vec![false; n];
        let mut sorted_blocks = Vec::with_capacity(blocks.len());
        for block in blocks {
            if block.is_empty() {
                return Err(Error::Partition("empty block".into()));
            }
            for &idx in &block {
                if idx < 1 || idx > n {
                    return Err(Error::Partition(format!(
                        "subsystem index {idx} out of range 1..={n}"
                    )));
                }
                if seen[idx - 1] {
                    return Err(Error::Partition(format!("duplicate subsystem index {idx}")));
                }
                seen[idx - 1] = true;
            }
            let mut block = block;
            block.sort_unstable();
            sorted_blocks.push(block);
        }
        if let Some(missing) = seen.iter().position(|&s| !s) {
            return Err(Error::Partition(format!(
                "subsystem index {} missing from the partition",
                missing + 1
            )));
        }
        Ok(Self {
            blocks: sorted_blocks,
            n_subsystems: n,
        })
    }

    /// The trivial single-block partition of `{1..n}`.
    pub fn single_block(n: usize) -> Result<Self> {
        Self::new(std::vec![(1..=n).collect()], n)
    }

    /// All-singletons partition `1|2|...|n`.
    pub fn singletons(n: usize) -> Result<Self> {
        Self::new((1..=n).map(|i| std::vec![i]).collect(), n)
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// Number of blocks.
    pub fn k(&self) -> usize {
        self.blocks.len()
    }

    pub fn n_subsystems(&self) -> usize {
        self.n_subsystems
    }

    pub fn is_bipartition(&self) -> bool {
        self.blocks.len() == 2
    }

    /// Representative with blocks sorted by their minimum element.
    pub fn canonical(&self) -> Partition {
        let mut blocks = self.blocks.clone();
        blocks.sort_by_key(|b| b[0]);
        Partition {
            blocks,
            n_subsystems: self.n_subsystems,
        }
    }

    /// Whether two partitions describe the same split, ignoring block order.
    pub fn same_split(&self, other: &Partition) -> bool {
        self.canonical() == other.canonical()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text = self
            .blocks
            .iter()
            .map(|b| b.iter().map(ToString::to_string).join(","))
            .join("|");
        f.write_str(&text)
    }
}

/// Render a partition in the text grammar (same as `Display`).
pub fn format_partition(partition: &Partition) -> String {
    partition.to_string()
}

/// Parse the grammar `block ("|" block)*`, `block = index ("," index)*`
/// over `{1..n}`. Whitespace is ignored; block order is preserved.
pub fn parse_partition(text: &str, n: usize) -> Result<Partition> {
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut current: Vec<usize> = Vec::new();
    let mut digits = String::new();
    let mut token_start = 0usize;

    let finish_index = |digits: &mut String, current: &mut Vec<usize>, at: usize| -> Result<()> {
        if digits.is_empty() {
            return Err(Error::Parse {
                pos: at,
                msg: "expected a subsystem index".into(),
            });
        }
        let idx: usize = digits.parse().map_err(|_| Error::Parse {
            pos: at,
            msg: format!("invalid index `{digits}`"),
        })?;
        digits.clear();
        current.push(idx);
        Ok(())
    };

    for (pos, ch) in text.char_indices() {
        match ch {
            '0'..='9' => {
                if digits.is_empty() {
                    token_start = pos;
                }
                digits.push(ch);
            }
            ',' => finish_index(&mut digits, &mut current, token_start)?,
            '|' => {
                finish_index(&mut digits, &mut current, token_start)?;
                blocks.push(std::mem::take(&mut current));
            }
            c if c.is_whitespace() => {
                if !digits.is_empty() {
                    finish_index(&mut digits, &mut current, token_start)?;
                }
            }
            other => {
                return Err(Error::Parse {
                    pos,
                    msg: format!("unexpected character `{other}`"),
                });
            }
        }
    }
    finish_index(&mut digits, &mut current, token_start)?;
    blocks.push(current);

    // revalidate through the constructor, but report duplicates and range
    // problems as parse errors with a position
    for (b, block) in blocks.iter().enumerate() {
        for &idx in block {
            if idx < 1 || idx > n {
                return Err(Error::Parse {
                    pos: position_of_index(text, idx),
                    msg: format!("index {idx} out of range 1..={n} (block {})", b + 1),
                });
            }
        }
    }
    let mut seen = vec![false; n];
    for block in &blocks {
        for &idx in block {
            if seen[idx - 1] {
                return Err(Error::Parse {
                    pos: position_of_index(text, idx),
                    msg: format!("duplicate index {idx}"),
                });
            }
            seen[idx - 1] = true;
        }
    }
    if let Some(missing) = seen.iter().position(|&s| !s) {
        return Err(Error::Parse {
            pos: text.len(),
            msg: format!("index {} missing from the partition", missing + 1),
        });
    }
    Partition::new(blocks, n)
}

/// Byte offset of the last occurrence of `idx` as a full token, for error
/// reporting; falls back to 0 when not found.
fn position_of_index(text: &str, idx: usize) -> usize {
    let needle = idx.to_string();
    let bytes = text.as_bytes();
    let mut best = 0usize;
    let mut start = 0usize;
    while let Some(found) = text[start..].find(&needle) {
        let pos = start + found;
        let before_ok = pos == 0 || !bytes[pos - 1].is_ascii_digit();
        let end = pos + needle.len();
        let after_ok = end >= bytes.len() || !bytes[end].is_ascii_digit();
        if before_ok && after_ok {
            best = pos;
        }
        start = pos + 1;
    }
    best
}

/// All `2^(N-1) - 1` bipartitions of `{1..N}`, canonical (the block holding
/// label 1 first), ordered by first-block size then lexicographically.
pub fn enumerate_bipartitions(n: usize) -> Result<Vec<Partition>> {
    if n < 2 {
        return Err(Error::Partition(format!(
            "bipartitions need at least 2 subsystems, got {n}"
        )));
    }
    let rest: Vec<usize> = (2..=n).collect();
    let mut out = Vec::with_capacity((1usize << (n - 1)) - 1);
    for size in 1..n {
        for companions in rest.iter().copied().combinations(size - 1) {
            let mut first = std::vec![1];
            first.extend(companions);
            let second: Vec<usize> = (1..=n).filter(|i| !first.contains(i)).collect();
            out.push(Partition::new(std::vec![first, second], n)?);
        }
    }
    Ok(out)
}

/// The one-vs-rest family `i | {1..N} \ {i}`, singleton block leading.
/// For `N = 2` the two orientations are the same split, so only `1|2` is
/// returned.
pub fn one_vs_rest_partitions(n: usize) -> Result<Vec<Partition>> {
    if n < 2 {
        return Err(Error::Partition(format!(
            "one-vs-rest partitions need at least 2 subsystems, got {n}"
        )));
    }
    if n == 2 {
        return Ok(std::vec![Partition::new(
            std::vec![std::vec![1], std::vec![2]],
            2
        )?]);
    }
    (1..=n)
        .map(|i| {
            let rest: Vec<usize> = (1..=n).filter(|&j| j != i).collect();
            Partition::new(std::vec![std::vec![i], rest], n)
        })
        .collect()
}

/// Composite dimension of each block, in block order: entry `t` is the
/// product of `dims[i-1]` over the labels `i` in block `t`.
pub fn coarse_grain_dims(dims: &[usize], partition: &Partition) -> Result<Vec<usize>> {
    if partition.n_subsystems() != dims.len() {
        return Err(Error::Partition(format!(
            "partition over {} subsystems applied to {} dims",
            partition.n_subsystems(),
            dims.len()
        )));
    }
    Ok(partition
        .blocks()
        .iter()
        .map(|block| block.iter().map(|&i| dims[i - 1]).product())
        .collect())
}
