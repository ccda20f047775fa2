use super::{Label, Split};
use crate::{Error, Result};

/// Block length of the four labeled blocks in the canonical IMDB layout.
pub const IMDB_BLOCK_LEN: usize = 12_500;
/// Length of the trailing unlabeled block in the canonical IMDB layout.
pub const IMDB_EXTRA_LEN: usize = 50_000;

/// A maximal run of documents sharing a (class, split) pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Block {
    pub label: Label,
    pub split: Split,
    pub start: usize,
    pub len: usize,
}

impl Block {
    pub fn end(&self) -> usize {
        self.start + self.len
    }

    pub fn range(&self) -> std::ops::Range<usize> {
        self.start..self.end()
    }
}

/// Contiguous, non-overlapping blocks covering `0..N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockLayout {
    blocks: Vec<Block>,
    block_of: Vec<u32>,
}

impl BlockLayout {
    /// Infer blocks as maximal runs of identical (label, split) tags.
    pub fn infer(tags: &[(Label, Split)]) -> Self {
        let mut blocks: Vec<Block> = Vec::new();
        for (i, &(label, split)) in tags.iter().enumerate() {
            match blocks.last_mut() {
                Some(b) if b.label == label && b.split == split => b.len += 1,
                _ => blocks.push(Block {
                    label,
                    split,
                    start: i,
                    len: 1,
                }),
            }
        }
        Self::from_blocks_unchecked(blocks)
    }

    /// Build from explicit blocks, checking they tile `0..N` with non-empty
    /// blocks.
    pub fn from_blocks(blocks: Vec<Block>) -> Result<Self> {
        let mut next = 0;
        for b in &blocks {
            if b.start != next || b.len == 0 {
                return Err(Error::InvalidArgument(format!(
                    "block {b:?} does not continue the layout at index {next}"
                )));
            }
            next = b.end();
        }
        Ok(Self::from_blocks_unchecked(blocks))
    }

    fn from_blocks_unchecked(blocks: Vec<Block>) -> Self {
        let mut block_of = Vec::with_capacity(blocks.last().map_or(0, Block::end));
        for (k, b) in blocks.iter().enumerate() {
            block_of.extend(std::iter::repeat_n(k as u32, b.len));
        }
        BlockLayout { blocks, block_of }
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    /// Number of documents covered.
    pub fn len(&self) -> usize {
        self.block_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.block_of.is_empty()
    }

    /// Index into [`blocks`](Self::blocks) of the block holding document `i`.
    pub fn block_index(&self, i: usize) -> usize {
        self.block_of[i] as usize
    }

    pub fn block_containing(&self, i: usize) -> &Block {
        &self.blocks[self.block_index(i)]
    }

    pub fn same_block(&self, i: usize, j: usize) -> bool {
        self.block_of[i] == self.block_of[j]
    }

    /// Whether this is the canonical five-block IMDB layout: positive train,
    /// negative train, positive test, negative test (12500 each), then 50000
    /// unlabeled documents.
    pub fn is_imdb_canonical(&self) -> bool {
        let expected = [
            (Label::Positive, Split::Train, IMDB_BLOCK_LEN),
            (Label::Negative, Split::Train, IMDB_BLOCK_LEN),
            (Label::Positive, Split::Test, IMDB_BLOCK_LEN),
            (Label::Negative, Split::Test, IMDB_BLOCK_LEN),
            (Label::Unlabeled, Split::Extra, IMDB_EXTRA_LEN),
        ];
        self.blocks.len() == expected.len()
            && self
                .blocks
                .iter()
                .zip(expected)
                .all(|(b, (l, s, n))| b.label == l && b.split == s && b.len == n)
    }

    /// Fails unless the layout is the canonical IMDB layout.
    pub fn check_imdb_canonical(&self) -> Result<()> {
        if self.is_imdb_canonical() {
            Ok(())
        } else {
            let first = self.blocks.first();
            Err(Error::InvalidArgument(format!(
                "layout is not the canonical IMDB layout (first block {first:?}, {} blocks)",
                self.blocks.len()
            )))
        }
    }

    /// The canonical IMDB tag sequence (100000 documents).
    pub fn imdb_canonical_tags() -> Vec<(Label, Split)> {
        let mut tags = Vec::with_capacity(4 * IMDB_BLOCK_LEN + IMDB_EXTRA_LEN);
        for (l, s) in [
            (Label::Positive, Split::Train),
            (Label::Negative, Split::Train),
            (Label::Positive, Split::Test),
            (Label::Negative, Split::Test),
        ] {
            tags.extend(std::iter::repeat_n((l, s), IMDB_BLOCK_LEN));
        }
        tags.extend(std::iter::repeat_n(
            (Label::Unlabeled, Split::Extra),
            IMDB_EXTRA_LEN,
        ));
        tags
    }
}
