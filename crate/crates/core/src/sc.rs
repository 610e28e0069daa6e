//! Successive-cancellation decoding with forced bit flips, and the path
//! metrics built from the per-bit decision LLRs.

use std::fmt;

use crate::channel::{LlrDomain, LlrVector};
use crate::code::CodeSpec;
use crate::error::{param, Result};

/// Check-node update used by the SC recursion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LlrMode {
    #[default]
    MinSum,
    /// Full tanh rule.
    Exact,
}

/// How a decision contributes to the path metric.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PmMode {
    /// `|alpha|` for every decision against the sign of its LLR, else 0.
    #[default]
    Hard,
    /// `ln(1 + exp(-(1 - 2u) alpha))` for every decision.
    Exact,
}

impl fmt::Display for LlrMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LlrMode::MinSum => "minsum",
            LlrMode::Exact => "exact",
        })
    }
}

impl fmt::Display for PmMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PmMode::Hard => "hard",
            PmMode::Exact => "exact",
        })
    }
}

/// Hard decision with `sgn(0) = +1`.
#[inline]
pub fn hard(alpha: f64) -> u8 {
    u8::from(alpha < 0.0)
}

#[inline]
pub fn f_minsum(a: f64, b: f64) -> f64 {
    let m = a.abs().min(b.abs());
    if (a < 0.0) != (b < 0.0) {
        -m
    } else {
        m
    }
}

/// `2 atanh(tanh(a/2) tanh(b/2))`, evaluated in a form that stays finite
/// for large inputs.
#[inline]
pub fn f_exact(a: f64, b: f64) -> f64 {
    f_minsum(a, b) + softplus(-(a + b).abs()) - softplus(-(a - b).abs())
}

#[inline]
pub fn g_combine(a: f64, b: f64, u_hat: u8) -> f64 {
    if u_hat & 1 == 0 {
        b + a
    } else {
        b - a
    }
}

/// `ln(1 + e^x)` without overflow.
#[inline]
pub(crate) fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

/// Path-metric increment for deciding `u` when the bit LLR is `alpha`.
#[inline]
pub fn decision_cost(alpha: f64, u: u8, mode: PmMode) -> f64 {
    match mode {
        PmMode::Hard => {
            if u != hard(alpha) {
                alpha.abs()
            } else {
                0.0
            }
        }
        PmMode::Exact => {
            let signed = if u == 0 { alpha } else { -alpha };
            softplus(-signed)
        }
    }
}

/// Information-bit indices whose SC decision is forced to the complement
/// of its hard decision. Strictly increasing.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct FlipSet(Vec<usize>);

impl FlipSet {
    pub fn empty() -> Self {
        FlipSet(Vec::new())
    }

    pub fn new(indices: Vec<usize>) -> Result<Self> {
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return param(format!("flip indices must be strictly increasing: {indices:?}"));
        }
        Ok(FlipSet(indices))
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max(&self) -> Option<usize> {
        self.0.last().copied()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    /// `self ∪ {i}`; `i` must exceed every current index.
    pub fn extended(&self, i: usize) -> Result<Self> {
        if self.max().is_some_and(|m| i <= m) {
            return param(format!("flip index {i} does not follow {:?}", self.0));
        }
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.extend_from_slice(&self.0);
        v.push(i);
        Ok(FlipSet(v))
    }

    pub(crate) fn check_against(&self, spec: &CodeSpec) -> Result<()> {
        for &i in &self.0 {
            if i >= spec.n() || spec.is_frozen(i) {
                return param(format!("flip index {i} is not an information bit"));
            }
        }
        Ok(())
    }
}

impl fmt::Display for FlipSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{i}")?;
        }
        f.write_str("}")
    }
}

/// One SC candidate.
#[derive(Debug, Clone, PartialEq)]
pub struct ScOutput {
    pub u_hat: Vec<u8>,
    /// Decision-time LLR of every bit, frozen ones included.
    pub alpha_u: LlrVector,
    pub pm: f64,
}

/// SC decoder with reusable scratch space. One instance per thread.
#[derive(Debug, Clone)]
pub struct ScDecoder<'a> {
    spec: &'a CodeSpec,
    llr_mode: LlrMode,
    pm_mode: PmMode,
    llr: Vec<f64>,
    partial: Vec<u8>,
}

struct Leaves<'s> {
    frozen: &'s [bool],
    flips: &'s [usize],
    next_flip: usize,
    index: usize,
    pm_mode: PmMode,
    pm: f64,
    pm_before: Vec<f64>,
    u_hat: Vec<u8>,
    alpha_u: Vec<f64>,
}

impl<'a> ScDecoder<'a> {
    pub fn new(spec: &'a CodeSpec, llr_mode: LlrMode, pm_mode: PmMode) -> Self {
        let n = spec.n();
        ScDecoder {
            spec,
            llr_mode,
            pm_mode,
            llr: vec![0.0; 2 * n],
            partial: vec![0; n],
        }
    }

    pub fn spec(&self) -> &'a CodeSpec {
        self.spec
    }

    pub fn llr_mode(&self) -> LlrMode {
        self.llr_mode
    }

    pub fn pm_mode(&self) -> PmMode {
        self.pm_mode
    }

    pub fn decode(&mut self, alpha_ch: &LlrVector, flips: &FlipSet) -> Result<ScOutput> {
        if alpha_ch.domain() != LlrDomain::Channel {
            return param("SC decoding needs channel-domain LLRs");
        }
        if alpha_ch.len() != self.spec.n() {
            return param(format!(
                "received {} LLRs for a length-{} code",
                alpha_ch.len(),
                self.spec.n()
            ));
        }
        flips.check_against(self.spec)?;
        Ok(self.decode_unchecked(alpha_ch.values(), flips))
    }

    /// Decode without validating inputs; callers guarantee a length-N
    /// channel vector and a flip set of information indices.
    pub(crate) fn decode_unchecked(&mut self, alpha_ch: &[f64], flips: &FlipSet) -> ScOutput {
        self.decode_with_prefix(alpha_ch, flips).0
    }

    /// Like [`Self::decode_unchecked`], also returning the running path
    /// metric before every bit.
    pub(crate) fn decode_with_prefix(&mut self, alpha_ch: &[f64], flips: &FlipSet) -> (ScOutput, PrefixCosts) {
        let n = self.spec.n();
        self.llr[n..].copy_from_slice(alpha_ch);
        let mut leaves = Leaves {
            frozen: self.spec.frozen_mask(),
            flips: flips.indices(),
            next_flip: 0,
            index: 0,
            pm_mode: self.pm_mode,
            pm: 0.0,
            pm_before: Vec::with_capacity(n + 1),
            u_hat: vec![0; n],
            alpha_u: vec![0.0; n],
        };
        match self.llr_mode {
            LlrMode::MinSum => descend(n, &mut self.llr, &mut self.partial, &mut leaves, f_minsum),
            LlrMode::Exact => descend(n, &mut self.llr, &mut self.partial, &mut leaves, f_exact),
        }
        debug_assert_eq!(leaves.index, n);
        debug_assert_eq!(leaves.next_flip, flips.len());
        leaves.pm_before.push(leaves.pm);
        let prefix = PrefixCosts {
            before: leaves.pm_before,
            mode: self.pm_mode,
        };
        let out = ScOutput {
            u_hat: leaves.u_hat,
            alpha_u: LlrVector::bit_decision_unchecked(leaves.alpha_u),
            pm: leaves.pm,
        };
        (out, prefix)
    }
}

/// Decodes the sub-block of length `n` whose input LLRs sit at
/// `llr[n..2n]`, writing its re-encoded bits into `out`.
fn descend<F: Fn(f64, f64) -> f64 + Copy>(n: usize, llr: &mut [f64], out: &mut [u8], leaves: &mut Leaves<'_>, f: F) {
    if n == 1 {
        let alpha = llr[1];
        let i = leaves.index;
        let u = if leaves.frozen[i] {
            0
        } else if leaves.flips.get(leaves.next_flip) == Some(&i) {
            leaves.next_flip += 1;
            1 - hard(alpha)
        } else {
            hard(alpha)
        };
        leaves.pm_before.push(leaves.pm);
        leaves.pm += decision_cost(alpha, u, leaves.pm_mode);
        leaves.u_hat[i] = u;
        leaves.alpha_u[i] = alpha;
        leaves.index += 1;
        out[0] = u;
        return;
    }
    let half = n / 2;
    {
        let (lo, hi) = llr.split_at_mut(n);
        let (a, b) = hi[..n].split_at(half);
        for ((dst, &x), &y) in lo[half..n].iter_mut().zip(a).zip(b) {
            *dst = f(x, y);
        }
    }
    descend(half, llr, &mut out[..half], leaves, f);
    {
        let (lo, hi) = llr.split_at_mut(n);
        let (a, b) = hi[..n].split_at(half);
        for (((dst, &x), &y), &c) in lo[half..n].iter_mut().zip(a).zip(b).zip(&out[..half]) {
            *dst = g_combine(x, y, c);
        }
    }
    descend(half, llr, &mut out[half..], leaves, f);
    let (left, right) = out.split_at_mut(half);
    for (l, &r) in left.iter_mut().zip(right.iter()) {
        *l ^= r;
    }
}

/// Single SC pass with min-sum updates and the hard path metric.
pub fn sc_decode(alpha_ch: &LlrVector, spec: &CodeSpec, flips: &FlipSet) -> Result<ScOutput> {
    ScDecoder::new(spec, LlrMode::MinSum, PmMode::Hard).decode(alpha_ch, flips)
}

/// The decision SC takes at bit `i` given its LLR and the flip set.
#[inline]
pub(crate) fn decision(spec: &CodeSpec, flips: &FlipSet, alpha: f64, i: usize) -> u8 {
    if spec.is_frozen(i) {
        0
    } else if flips.contains(i) {
        1 - hard(alpha)
    } else {
        hard(alpha)
    }
}

fn check_bit_domain(alpha_u: &LlrVector, spec: &CodeSpec) -> Result<()> {
    if alpha_u.domain() != LlrDomain::BitDecision {
        return param("path metrics need bit-decision-domain LLRs");
    }
    if alpha_u.len() != spec.n() {
        return param(format!("expected {} decision LLRs, got {}", spec.n(), alpha_u.len()));
    }
    Ok(())
}

/// Path metric of the candidate implied by `alpha_u` and `flips`, summed in
/// bit order.
pub fn path_metric(alpha_u: &LlrVector, spec: &CodeSpec, flips: &FlipSet, mode: PmMode) -> Result<f64> {
    check_bit_domain(alpha_u, spec)?;
    flips.check_against(spec)?;
    Ok(alpha_u
        .values()
        .iter()
        .enumerate()
        .fold(0.0, |acc, (i, &a)| acc + decision_cost(a, decision(spec, flips, a, i), mode)))
}

/// Metric of the child node `flips ∪ {i}` over bits `0..=i`, from the
/// parent's decision LLRs. Every descendant of that child has a full path
/// metric at least this large.
pub fn pm_lower_bound(
    alpha_u: &LlrVector,
    spec: &CodeSpec,
    flips: &FlipSet,
    i: usize,
    mode: PmMode,
) -> Result<f64> {
    check_bit_domain(alpha_u, spec)?;
    flips.check_against(spec)?;
    if i >= spec.n() || spec.is_frozen(i) {
        return param(format!("bit {i} is not an information bit"));
    }
    if flips.max().is_some_and(|m| i <= m) {
        return param(format!("bit {i} does not follow the flip set {flips}"));
    }
    let prefix = PrefixCosts::new(alpha_u.values(), spec, flips, mode);
    Ok(prefix.child_bound(alpha_u.values(), i))
}

/// Running path metric before each bit, accumulated in the same order as a
/// full decode so that bounds and full metrics compare consistently.
#[derive(Debug, Clone)]
pub(crate) struct PrefixCosts {
    before: Vec<f64>,
    mode: PmMode,
}

impl PrefixCosts {
    pub(crate) fn new(alpha_u: &[f64], spec: &CodeSpec, flips: &FlipSet, mode: PmMode) -> Self {
        let mut before = Vec::with_capacity(alpha_u.len() + 1);
        let mut acc = 0.0;
        for (i, &a) in alpha_u.iter().enumerate() {
            before.push(acc);
            acc += decision_cost(a, decision(spec, flips, a, i), mode);
        }
        before.push(acc);
        PrefixCosts { before, mode }
    }

    /// Bound for flipping information bit `i` (larger than every index in
    /// the parent's flip set).
    #[inline]
    pub(crate) fn child_bound(&self, alpha_u: &[f64], i: usize) -> f64 {
        let a = alpha_u[i];
        self.before[i] + decision_cost(a, 1 - hard(a), self.mode)
    }

    pub(crate) fn total(&self) -> f64 {
        *self.before.last().unwrap()
    }
}
