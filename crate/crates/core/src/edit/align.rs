/// Kind of a single alignment step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OpKind {
    Match,
    Substitute,
    Insert,
    Delete,
}

/// One step of an alignment transforming a source sequence into a hypothesis.
///
/// Indices are positions in the source and hypothesis respectively.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AlignmentOp {
    Match { src: usize, hyp: usize },
    Substitute { src: usize, hyp: usize },
    Insert { hyp: usize },
    Delete { src: usize },
}

impl AlignmentOp {
    pub fn kind(&self) -> OpKind {
        match self {
            AlignmentOp::Match { .. } => OpKind::Match,
            AlignmentOp::Substitute { .. } => OpKind::Substitute,
            AlignmentOp::Insert { .. } => OpKind::Insert,
            AlignmentOp::Delete { .. } => OpKind::Delete,
        }
    }

    pub fn src_index(&self) -> Option<usize> {
        match *self {
            AlignmentOp::Match { src, .. }
            | AlignmentOp::Substitute { src, .. }
            | AlignmentOp::Delete { src } => Some(src),
            AlignmentOp::Insert { .. } => None,
        }
    }

    pub fn hyp_index(&self) -> Option<usize> {
        match *self {
            AlignmentOp::Match { hyp, .. }
            | AlignmentOp::Substitute { hyp, .. }
            | AlignmentOp::Insert { hyp } => Some(hyp),
            AlignmentOp::Delete { .. } => None,
        }
    }

    pub fn is_match(&self) -> bool {
        matches!(self, AlignmentOp::Match { .. })
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OpCounts {
    pub matches: usize,
    pub substitutions: usize,
    pub insertions: usize,
    pub deletions: usize,
}

impl OpCounts {
    pub fn from_ops(ops: &[AlignmentOp]) -> Self {
        let mut c = OpCounts::default();
        for op in ops {
            match op.kind() {
                OpKind::Match => c.matches += 1,
                OpKind::Substitute => c.substitutions += 1,
                OpKind::Insert => c.insertions += 1,
                OpKind::Delete => c.deletions += 1,
            }
        }
        c
    }

    /// Number of non-match operations, i.e. the unit-cost edit distance.
    pub fn edits(&self) -> usize {
        self.substitutions + self.insertions + self.deletions
    }
}

/// Character-level alignment summary.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CharAlignment {
    pub distance: usize,
    pub counts: OpCounts,
}

fn distance_table<T: PartialEq>(src: &[T], hyp: &[T]) -> Vec<Vec<usize>> {
    let (n, m) = (src.len(), hyp.len());
    let mut d = vec![vec![0usize; m + 1]; n + 1];
    for (i, row) in d.iter_mut().enumerate() {
        row[0] = i;
    }
    for j in 0..=m {
        d[0][j] = j;
    }
    for i in 1..=n {
        for j in 1..=m {
            let diag = d[i - 1][j - 1] + usize::from(src[i - 1] != hyp[j - 1]);
            d[i][j] = diag.min(d[i - 1][j] + 1).min(d[i][j - 1] + 1);
        }
    }
    d
}

/// Unit-cost Levenshtein distance.
pub fn distance<T: PartialEq>(src: &[T], hyp: &[T]) -> usize {
    // Two-row variant; the full table is only needed for backtraces.
    let mut prev: Vec<usize> = (0..=hyp.len()).collect();
    let mut cur = vec![0; hyp.len() + 1];
    for (i, s) in src.iter().enumerate() {
        cur[0] = i + 1;
        for (j, h) in hyp.iter().enumerate() {
            let diag = prev[j] + usize::from(s != h);
            cur[j + 1] = diag.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[hyp.len()]
}

/// Minimum-cost alignment under unit costs.
///
/// The backtrace runs from the end of both sequences and, among predecessors
/// that achieve the optimal cost, prefers match, then substitute, then
/// delete, then insert.
pub fn align<T: PartialEq>(src: &[T], hyp: &[T]) -> Vec<AlignmentOp> {
    let d = distance_table(src, hyp);
    let (mut i, mut j) = (src.len(), hyp.len());
    let mut ops = Vec::with_capacity(i.max(j));
    while i > 0 || j > 0 {
        let here = d[i][j];
        if i > 0 && j > 0 && src[i - 1] == hyp[j - 1] && d[i - 1][j - 1] == here {
            ops.push(AlignmentOp::Match { src: i - 1, hyp: j - 1 });
            i -= 1;
            j -= 1;
        } else if i > 0 && j > 0 && src[i - 1] != hyp[j - 1] && d[i - 1][j - 1] + 1 == here {
            ops.push(AlignmentOp::Substitute { src: i - 1, hyp: j - 1 });
            i -= 1;
            j -= 1;
        } else if i > 0 && d[i - 1][j] + 1 == here {
            ops.push(AlignmentOp::Delete { src: i - 1 });
            i -= 1;
        } else {
            ops.push(AlignmentOp::Insert { hyp: j - 1 });
            j -= 1;
        }
    }
    ops.reverse();
    ops
}

/// Word-level alignment of two token sequences.
pub fn align_words<S: AsRef<str>>(src: &[S], hyp: &[S]) -> Vec<AlignmentOp> {
    let src: Vec<&str> = src.iter().map(AsRef::as_ref).collect();
    let hyp: Vec<&str> = hyp.iter().map(AsRef::as_ref).collect();
    align(&src, &hyp)
}

/// Character-level distance and per-kind operation counts.
pub fn align_chars(a: &str, b: &str) -> CharAlignment {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let counts = OpCounts::from_ops(&align(&a, &b));
    CharAlignment {
        distance: counts.edits(),
        counts,
    }
}
