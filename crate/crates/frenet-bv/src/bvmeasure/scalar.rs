//! Scalar functions of bounded variation on an interval (0, L).
//!
//! A [`BVScalar`] is an absolutely continuous part, stored as ordered
//! pieces (affine or uniformly sampled with linear interpolation), plus an
//! explicit list of jump atoms. Jump values are right-minus-left and the
//! pointwise value at a jump is always the arithmetic mean of the one-sided
//! limits.

use crate::error::{Error, Result};

/// One jump atom: location in (0, L) and value `u(s+) - u(s-)`, nonzero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jump {
    pub location: f64,
    pub value: f64,
}

/// Continuous piece of the absolutely continuous part.
#[derive(Debug, Clone, PartialEq)]
pub enum Piece {
    /// `u(s) = slope * s + intercept` in global coordinates.
    Affine { slope: f64, intercept: f64 },
    /// Uniform samples over the piece, linearly interpolated.
    Samples { values: Vec<f64> },
}

/// Which one-sided limit to take at a point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Minus,
    Plus,
}

/// Node of the evaluation grid. Jump locations appear twice, once per side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridNode {
    pub s: f64,
    pub side: Side,
}

/// Scalar BV function on (0, L).
#[derive(Debug, Clone, PartialEq)]
pub struct BVScalar {
    length: f64,
    /// `b_0 = 0 < ... < b_m = L`
    breakpoints: Vec<f64>,
    pieces: Vec<Piece>,
    jumps: Vec<Jump>,
    jump_prefix: Vec<f64>,
    /// antiderivative of the ac part at each breakpoint
    ac_integral_prefix: Vec<f64>,
    monotone: bool,
}

/// Derivative decomposition of a [`BVScalar`]: sampled ac density, jump
/// atoms, and the two masses.
#[derive(Debug, Clone)]
pub struct DerivativeDecomposition {
    /// `(s, u'(s))` on the evaluation grid, one-sided at jumps.
    pub density: Vec<(f64, f64)>,
    pub jump_atoms: Vec<Jump>,
    /// Total variation of the absolutely continuous part.
    pub ac_mass: f64,
    /// Sum of absolute jump values.
    pub jump_mass: f64,
}

const MERGE_TOL: f64 = 1e-12;

impl BVScalar {
    /// Builds a BV function from `(piece end, piece)` pairs covering (0, L)
    /// and a jump list. Jump locations that fall inside an affine piece
    /// split it; inside a sampled piece they must land on a sample node.
    pub fn new(
        length: f64,
        pieces: Vec<(f64, Piece)>,
        jumps: Vec<Jump>,
        monotone: bool,
    ) -> Result<Self> {
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::BadLength(length));
        }
        if pieces.is_empty() {
            return Err(Error::BadBreakpoints("no pieces".into()));
        }
        let mut breakpoints = vec![0.0];
        let mut body = Vec::with_capacity(pieces.len());
        for (end, piece) in pieces {
            let prev = *breakpoints.last().unwrap();
            if !(end.is_finite() && end > prev + MERGE_TOL * length.max(1.0)) {
                return Err(Error::BadBreakpoints(format!(
                    "piece end {end} does not increase past {prev}"
                )));
            }
            if let Piece::Samples { values } = &piece {
                if values.len() < 2 || values.iter().any(|v| !v.is_finite()) {
                    return Err(Error::BadBreakpoints(
                        "sampled piece needs at least two finite values".into(),
                    ));
                }
            }
            breakpoints.push(end);
            body.push(piece);
        }
        {
            let last = breakpoints.last_mut().unwrap();
            if (*last - length).abs() > MERGE_TOL * length.max(1.0) {
                return Err(Error::BadBreakpoints(format!(
                    "last piece ends at {last}, expected {length}"
                )));
            }
            *last = length;
        }

        // continuity of the ac part across interior breakpoints
        for j in 1..body.len() {
            let s = breakpoints[j];
            let left = piece_value(&body[j - 1], breakpoints[j - 1], s, s);
            let right = piece_value(&body[j], s, breakpoints[j + 1], s);
            let gap = (left - right).abs();
            if gap > 1e-9 {
                return Err(Error::AcDiscontinuity { location: s, gap });
            }
        }

        // jump list: sorted, distinct, interior, nonzero
        let mut jumps = jumps;
        jumps.sort_by(|a, b| a.location.total_cmp(&b.location));
        for w in jumps.windows(2) {
            if w[1].location - w[0].location <= MERGE_TOL * length.max(1.0) {
                return Err(Error::BadJumpList(format!(
                    "jump locations {} and {} are not distinct",
                    w[0].location, w[1].location
                )));
            }
        }
        for j in &jumps {
            if !(j.location > 0.0 && j.location < length) {
                return Err(Error::BadJumpList(format!(
                    "jump location {} outside (0, {length})",
                    j.location
                )));
            }
            if !(j.value.is_finite() && j.value != 0.0) {
                return Err(Error::BadJumpList(format!(
                    "jump at {} has value {}",
                    j.location, j.value
                )));
            }
        }

        let mut out = Self {
            length,
            breakpoints,
            pieces: body,
            jumps,
            jump_prefix: Vec::new(),
            ac_integral_prefix: Vec::new(),
            monotone,
        };
        out.align_jumps_to_breakpoints()?;
        if monotone {
            out.check_strictly_increasing()?;
        }
        out.jump_prefix = out
            .jumps
            .iter()
            .scan(0.0, |acc, j| {
                *acc += j.value;
                Some(*acc)
            })
            .collect();
        out.ac_integral_prefix = out.build_ac_prefix();
        Ok(out)
    }

    /// Single affine piece plus jumps.
    pub fn affine(
        length: f64,
        slope: f64,
        intercept: f64,
        jumps: Vec<Jump>,
        monotone: bool,
    ) -> Result<Self> {
        Self::new(
            length,
            vec![(length, Piece::Affine { slope, intercept })],
            jumps,
            monotone,
        )
    }

    /// Single sampled piece over the full interval.
    pub fn from_samples(length: f64, values: Vec<f64>, monotone: bool) -> Result<Self> {
        Self::new(length, vec![(length, Piece::Samples { values })], vec![], monotone)
    }

    fn align_jumps_to_breakpoints(&mut self) -> Result<()> {
        let tol = MERGE_TOL * self.length.max(1.0);
        let locations: Vec<f64> = self.jumps.iter().map(|j| j.location).collect();
        for (k, loc) in locations.iter().enumerate() {
            if let Some(b) = self
                .breakpoints
                .iter()
                .find(|b| (**b - loc).abs() <= tol)
            {
                self.jumps[k].location = *b;
                continue;
            }
            // split the containing piece
            let idx = self.piece_index(*loc);
            let (a, b) = (self.breakpoints[idx], self.breakpoints[idx + 1]);
            match self.pieces[idx].clone() {
                Piece::Affine { slope, intercept } => {
                    self.breakpoints.insert(idx + 1, *loc);
                    self.pieces
                        .insert(idx + 1, Piece::Affine { slope, intercept });
                }
                Piece::Samples { values } => {
                    let n = values.len();
                    let h = (b - a) / (n - 1) as f64;
                    let t = (loc - a) / h;
                    let i = t.round() as usize;
                    let node = a + i as f64 * h;
                    if (node - loc).abs() > tol || i == 0 || i >= n - 1 {
                        return Err(Error::BadJumpList(format!(
                            "jump at {loc} does not coincide with a sample node"
                        )));
                    }
                    self.jumps[k].location = node;
                    self.breakpoints.insert(idx + 1, node);
                    let right = values[i..].to_vec();
                    let left = values[..=i].to_vec();
                    self.pieces[idx] = Piece::Samples { values: left };
                    self.pieces
                        .insert(idx + 1, Piece::Samples { values: right });
                }
            }
        }
        Ok(())
    }

    fn check_strictly_increasing(&self) -> Result<()> {
        for (idx, p) in self.pieces.iter().enumerate() {
            let (a, b) = (self.breakpoints[idx], self.breakpoints[idx + 1]);
            match p {
                Piece::Affine { slope, .. } => {
                    if *slope < 1e-12 {
                        return Err(Error::NotIncreasing(format!(
                            "piece {idx} has slope {slope}"
                        )));
                    }
                }
                Piece::Samples { values } => {
                    let h = (b - a) / (values.len() - 1) as f64;
                    for w in values.windows(2) {
                        if (w[1] - w[0]) / h < 1e-12 {
                            return Err(Error::NotIncreasing(format!(
                                "sampled piece {idx} is not strictly increasing"
                            )));
                        }
                    }
                }
            }
        }
        for j in &self.jumps {
            if j.value <= 0.0 {
                return Err(Error::NotIncreasing(format!(
                    "jump at {} has value {}",
                    j.location, j.value
                )));
            }
        }
        Ok(())
    }

    fn build_ac_prefix(&self) -> Vec<f64> {
        let mut acc = 0.0;
        let mut prefix = vec![0.0];
        for (idx, p) in self.pieces.iter().enumerate() {
            let (a, b) = (self.breakpoints[idx], self.breakpoints[idx + 1]);
            acc += piece_integral(p, a, b, b);
            prefix.push(acc);
        }
        prefix
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn jumps(&self) -> &[Jump] {
        &self.jumps
    }

    pub fn monotone(&self) -> bool {
        self.monotone
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    /// Index of the piece evaluated at `s` (the right piece at an interior
    /// breakpoint).
    fn piece_index(&self, s: f64) -> usize {
        let i = self.breakpoints.partition_point(|b| *b <= s);
        i.saturating_sub(1).min(self.pieces.len() - 1)
    }

    /// Value of the absolutely continuous part, `s` clamped to [0, L].
    pub fn ac_value(&self, s: f64) -> f64 {
        let s = s.clamp(0.0, self.length);
        let idx = self.piece_index(s);
        piece_value(
            &self.pieces[idx],
            self.breakpoints[idx],
            self.breakpoints[idx + 1],
            s,
        )
    }

    fn jump_sum_before(&self, s: f64, inclusive: bool) -> f64 {
        let count = if inclusive {
            self.jumps.partition_point(|j| j.location <= s)
        } else {
            self.jumps.partition_point(|j| j.location < s)
        };
        if count == 0 {
            0.0
        } else {
            self.jump_prefix[count - 1]
        }
    }

    /// Left limit `u(s-)`; at `s <= 0` this is the right limit at 0.
    pub fn value_left(&self, s: f64) -> f64 {
        if s <= 0.0 {
            return self.value_right(0.0);
        }
        let s = s.min(self.length);
        self.ac_value(s) + self.jump_sum_before(s, false)
    }

    /// Right limit `u(s+)`; at `s >= L` this is the left limit at L.
    pub fn value_right(&self, s: f64) -> f64 {
        if s >= self.length {
            return self.value_left(self.length);
        }
        let s = s.max(0.0);
        self.ac_value(s) + self.jump_sum_before(s, true)
    }

    /// Precise representative `(u(s-) + u(s+)) / 2`.
    pub fn value_precise(&self, s: f64) -> f64 {
        (self.value_left(s) + self.value_right(s)) / 2.0
    }

    pub fn value_side(&self, s: f64, side: Side) -> f64 {
        match side {
            Side::Minus => self.value_left(s),
            Side::Plus => self.value_right(s),
        }
    }

    /// One-sided limits and the precise value at `s`.
    pub fn one_sided_limits(&self, s: f64) -> (f64, f64, f64) {
        let l = self.value_left(s);
        let r = self.value_right(s);
        (l, r, (l + r) / 2.0)
    }

    /// Local slope of the ac part approached from `side`.
    pub fn slope_side(&self, s: f64, side: Side) -> f64 {
        let s = s.clamp(0.0, self.length);
        let idx = match side {
            Side::Plus => self.piece_index(s),
            Side::Minus => {
                let i = self.breakpoints.partition_point(|b| *b < s);
                i.saturating_sub(1).min(self.pieces.len() - 1)
            }
        };
        let (a, b) = (self.breakpoints[idx], self.breakpoints[idx + 1]);
        match &self.pieces[idx] {
            Piece::Affine { slope, .. } => *slope,
            Piece::Samples { values } => {
                let n = values.len();
                let h = (b - a) / (n - 1) as f64;
                let t = (s - a) / h;
                let i = match side {
                    Side::Plus => (t.floor() as usize).min(n - 2),
                    Side::Minus => {
                        let up = t.ceil() as usize;
                        up.saturating_sub(1).min(n - 2)
                    }
                };
                (values[i + 1] - values[i]) / h
            }
        }
    }

    /// Antiderivative `U(t)` of the function extended constantly outside
    /// (0, L), with `U(0) = 0`. Jumps contribute `value * (t - location)+`.
    pub fn antiderivative(&self, t: f64) -> f64 {
        if t < 0.0 {
            return t * self.value_right(0.0);
        }
        if t > self.length {
            return self.antiderivative(self.length) + (t - self.length) * self.value_left(self.length);
        }
        let idx = self.piece_index(t);
        let ac = self.ac_integral_prefix[idx]
            + piece_integral(
                &self.pieces[idx],
                self.breakpoints[idx],
                self.breakpoints[idx + 1],
                t,
            );
        let jump_part: f64 = self
            .jumps
            .iter()
            .take_while(|j| j.location < t)
            .map(|j| j.value * (t - j.location))
            .sum();
        ac + jump_part
    }

    /// Sliding box average `(1/2eps) ∫_{s-eps}^{s+eps} u`.
    pub fn box_average(&self, s: f64, eps: f64) -> f64 {
        (self.antiderivative(s + eps) - self.antiderivative(s - eps)) / (2.0 * eps)
    }

    /// Total variation of the ac part (exact for the stored model).
    pub fn ac_mass(&self) -> f64 {
        self.pieces
            .iter()
            .enumerate()
            .map(|(idx, p)| {
                let (a, b) = (self.breakpoints[idx], self.breakpoints[idx + 1]);
                match p {
                    Piece::Affine { slope, .. } => slope.abs() * (b - a),
                    Piece::Samples { values } => {
                        values.windows(2).map(|w| (w[1] - w[0]).abs()).sum()
                    }
                }
            })
            .sum()
    }

    /// Signed diffuse mass `ac(L) - ac(0)`.
    pub fn diffuse_signed_mass(&self) -> f64 {
        self.ac_value(self.length) - self.ac_value(0.0)
    }

    pub fn jump_mass(&self) -> f64 {
        self.jumps.iter().map(|j| j.value.abs()).sum()
    }

    /// `|Du|(0, L) = ac mass + jump mass`.
    pub fn total_variation(&self) -> f64 {
        self.ac_mass() + self.jump_mass()
    }

    /// Evaluation grid: uniform base grid joined with all breakpoints;
    /// jump locations appear as a (minus, plus) pair.
    pub fn eval_nodes(&self, base: usize) -> Vec<GridNode> {
        let mut s_values: Vec<f64> = (0..=base)
            .map(|i| i as f64 * self.length / base as f64)
            .chain(self.breakpoints.iter().copied())
            .collect();
        s_values.sort_by(f64::total_cmp);
        s_values.dedup_by(|a, b| (*a - *b).abs() <= MERGE_TOL * self.length.max(1.0));
        let mut nodes = Vec::with_capacity(s_values.len() + self.jumps.len());
        for s in s_values {
            if self.jumps.iter().any(|j| j.location == s) {
                nodes.push(GridNode { s, side: Side::Minus });
                nodes.push(GridNode { s, side: Side::Plus });
            } else {
                nodes.push(GridNode { s, side: Side::Plus });
            }
        }
        nodes
    }

    /// Derivative decomposition with the density sampled on the default
    /// evaluation grid of `base` uniform intervals.
    pub fn decompose(&self, base: usize) -> DerivativeDecomposition {
        let density = self
            .eval_nodes(base)
            .iter()
            .map(|n| (n.s, self.slope_side(n.s, n.side)))
            .collect();
        DerivativeDecomposition {
            density,
            jump_atoms: self.jumps.clone(),
            ac_mass: self.ac_mass(),
            jump_mass: self.jump_mass(),
        }
    }

    /// Same ac part with only the jumps selected by `keep`.
    pub fn filter_jumps(&self, keep: impl Fn(&Jump) -> bool) -> Self {
        let jumps: Vec<Jump> = self.jumps.iter().copied().filter(|j| keep(j)).collect();
        let jump_prefix = jumps
            .iter()
            .scan(0.0, |acc, j| {
                *acc += j.value;
                Some(*acc)
            })
            .collect();
        Self {
            length: self.length,
            breakpoints: self.breakpoints.clone(),
            pieces: self.pieces.clone(),
            jumps,
            jump_prefix,
            ac_integral_prefix: self.ac_integral_prefix.clone(),
            monotone: self.monotone,
        }
    }

    /// Adds a jump to a copy of the function (used when materializing
    /// countable families).
    pub fn with_extra_jumps(&self, extra: &[Jump]) -> Result<Self> {
        let mut jumps = self.jumps.clone();
        jumps.extend_from_slice(extra);
        let pieces = self
            .pieces
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, p)| (self.breakpoints[i + 1], p))
            .collect();
        Self::new(self.length, pieces, jumps, self.monotone)
    }

    /// Lipschitz average `u_eps(s) = (1/2eps) ∫_{s-eps}^{s+eps} u`, with the
    /// function extended constantly outside (0, L). Fails when `eps` is at
    /// least the smallest gap between consecutive jumps or to the boundary.
    ///
    /// Output pieces break at every point where the window edge crosses a
    /// breakpoint or jump; pieces that the average keeps affine are stored
    /// in closed form, the rest are finely sampled.
    pub fn mollify(&self, eps: f64) -> Result<BVScalar> {
        if !(eps.is_finite() && eps > 0.0) {
            return Err(Error::MollifierWindow { eps, gap: 0.0 });
        }
        let mut gap = self.length;
        if !self.jumps.is_empty() {
            gap = gap.min(self.jumps[0].location);
            gap = gap.min(self.length - self.jumps.last().unwrap().location);
            for w in self.jumps.windows(2) {
                gap = gap.min(w[1].location - w[0].location);
            }
        }
        if eps >= gap {
            return Err(Error::MollifierWindow { eps, gap });
        }

        let mut kinks: Vec<f64> = vec![0.0, self.length];
        for b in &self.breakpoints {
            for cand in [b - eps, b + eps] {
                if cand > 0.0 && cand < self.length {
                    kinks.push(cand);
                }
            }
        }
        for j in &self.jumps {
            for cand in [j.location - eps, j.location + eps, j.location] {
                if cand > 0.0 && cand < self.length {
                    kinks.push(cand);
                }
            }
        }
        kinks.sort_by(f64::total_cmp);
        kinks.dedup_by(|a, b| (*a - *b).abs() <= MERGE_TOL * self.length.max(1.0));

        let scale = 1.0 + self.value_left(self.length).abs() + self.value_right(0.0).abs();
        let mut pieces = Vec::with_capacity(kinks.len() - 1);
        for w in kinks.windows(2) {
            let (a, b) = (w[0], w[1]);
            let va = self.box_average(a, eps);
            let vb = self.box_average(b, eps);
            let affine_ok = [0.25, 0.5, 0.75].iter().all(|t| {
                let s = a + t * (b - a);
                let lin = va + t * (vb - va);
                (self.box_average(s, eps) - lin).abs() <= 1e-12 * scale
            });
            if affine_ok {
                let slope = (vb - va) / (b - a);
                let intercept = va - slope * a;
                pieces.push((b, Piece::Affine { slope, intercept }));
            } else {
                let sub = (((b - a) / self.length * 4096.0).ceil() as usize).clamp(16, 4096);
                let values = (0..=sub)
                    .map(|i| self.box_average(a + (b - a) * i as f64 / sub as f64, eps))
                    .collect();
                pieces.push((b, Piece::Samples { values }));
            }
        }
        let out = BVScalar::new(self.length, pieces.clone(), vec![], false)?;
        if self.monotone && out.check_strictly_increasing().is_ok() {
            return BVScalar::new(self.length, pieces, vec![], true);
        }
        Ok(out)
    }
}

fn piece_value(p: &Piece, a: f64, b: f64, s: f64) -> f64 {
    match p {
        Piece::Affine { slope, intercept } => slope * s + intercept,
        Piece::Samples { values } => {
            let n = values.len();
            let t = ((s - a) / (b - a) * (n - 1) as f64).clamp(0.0, (n - 1) as f64);
            let i = (t.floor() as usize).min(n - 2);
            let frac = t - i as f64;
            values[i] * (1.0 - frac) + values[i + 1] * frac
        }
    }
}

/// ∫_a^t of the piece model, `t` within [a, b].
fn piece_integral(p: &Piece, a: f64, b: f64, t: f64) -> f64 {
    match p {
        Piece::Affine { slope, intercept } => {
            slope / 2.0 * (t * t - a * a) + intercept * (t - a)
        }
        Piece::Samples { values } => {
            let n = values.len();
            let h = (b - a) / (n - 1) as f64;
            let t_rel = ((t - a) / h).clamp(0.0, (n - 1) as f64);
            let full = (t_rel.floor() as usize).min(n - 2);
            let mut acc = 0.0;
            for i in 0..full {
                acc += (values[i] + values[i + 1]) / 2.0 * h;
            }
            let frac = t_rel - full as f64;
            if frac > 0.0 {
                let v_end = values[full] * (1.0 - frac) + values[full + 1] * frac;
                acc += (values[full] + v_end) / 2.0 * frac * h;
            }
            acc
        }
    }
}
