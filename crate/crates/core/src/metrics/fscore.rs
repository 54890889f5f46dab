use std::ops::{Add, AddAssign};

/// True positives, false positives and false negatives.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Counts {
    pub tp: usize,
    pub fp: usize,
    pub fn_: usize,
}

impl Counts {
    pub fn new(tp: usize, fp: usize, fn_: usize) -> Self {
        Counts { tp, fp, fn_ }
    }

    pub fn precision(&self) -> f64 {
        precision(self.tp, self.fp)
    }

    pub fn recall(&self) -> f64 {
        recall(self.tp, self.fn_)
    }

    pub fn f_score(&self, beta: f64) -> f64 {
        fbeta(self.precision(), self.recall(), beta)
    }
}

impl Add for Counts {
    type Output = Counts;

    fn add(self, o: Counts) -> Counts {
        Counts::new(self.tp + o.tp, self.fp + o.fp, self.fn_ + o.fn_)
    }
}

impl AddAssign for Counts {
    fn add_assign(&mut self, o: Counts) {
        *self = *self + o;
    }
}

/// `tp / (tp + fp)`, with 0/0 taken as 1.
pub fn precision(tp: usize, fp: usize) -> f64 {
    if tp + fp == 0 {
        1.0
    } else {
        tp as f64 / (tp + fp) as f64
    }
}

/// `tp / (tp + fn)`, with 0/0 taken as 1.
pub fn recall(tp: usize, fn_: usize) -> f64 {
    if tp + fn_ == 0 {
        1.0
    } else {
        tp as f64 / (tp + fn_) as f64
    }
}

/// Weighted harmonic mean `(1 + β²)·p·r / (β²·p + r)`; zero when both are zero.
pub fn fbeta(p: f64, r: f64, beta: f64) -> f64 {
    let b2 = beta * beta;
    let denom = b2 * p + r;
    if denom == 0.0 {
        0.0
    } else {
        (1.0 + b2) * p * r / denom
    }
}
