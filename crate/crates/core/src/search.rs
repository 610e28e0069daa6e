//! Bit-flipping tree search over repeated SC decodes.
//!
//! Every node of the tree is a flip set `E`; visiting it costs one SC
//! attempt with the decisions at `E` forced against their LLR signs. The
//! children of `E` extend it by one larger index. A child is only decoded
//! when the metric of its decided prefix, taken from the parent, is below
//! the best full path metric found so far; every candidate below that child
//! shares that prefix and cannot do better.

use std::fmt;

use crate::channel::{LlrDomain, LlrVector};
use crate::code::CodeSpec;
use crate::error::{param, Error, Result};
use crate::sc::{FlipSet, LlrMode, PmMode, PrefixCosts, ScDecoder, ScOutput};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    #[default]
    Dfs,
    Bfs,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    pub strategy: Strategy,
    /// Maximum number of simultaneous flips; `None` searches the whole tree.
    pub omega: Option<usize>,
    /// Visit siblings (DFS) or a whole level (BFS) in ascending
    /// [`order_metric`].
    pub ordered: bool,
    pub beta: f64,
    pub llr_mode: LlrMode,
    pub pm_mode: PmMode,
    /// Fail instead of growing the BFS frontier past this many nodes.
    pub bfs_frontier_cap: Option<usize>,
    /// Record one [`NodeVisit`] per SC attempt.
    pub trace: bool,
    /// Diagnostic switch. Disabling it decodes every node of the
    /// depth-limited tree.
    pub prune: bool,
    /// Diagnostic switch. Disabling it lets flips land on information bits
    /// after the last frozen bit.
    pub last_frozen_only: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            strategy: Strategy::Dfs,
            omega: None,
            ordered: false,
            beta: 0.8,
            llr_mode: LlrMode::MinSum,
            pm_mode: PmMode::Hard,
            bfs_frontier_cap: None,
            trace: false,
            prune: true,
            last_frozen_only: true,
        }
    }
}

impl SearchConfig {
    pub fn dfs() -> Self {
        SearchConfig::default()
    }

    pub fn bfs() -> Self {
        SearchConfig {
            strategy: Strategy::Bfs,
            ..SearchConfig::default()
        }
    }

    pub fn with_omega(mut self, omega: Option<usize>) -> Self {
        self.omega = omega;
        self
    }

    pub fn with_ordering(mut self, ordered: bool) -> Self {
        self.ordered = ordered;
        self
    }

    pub fn with_modes(mut self, llr_mode: LlrMode, pm_mode: PmMode) -> Self {
        self.llr_mode = llr_mode;
        self.pm_mode = pm_mode;
        self
    }

    pub fn validate(&self, spec: &CodeSpec) -> Result<()> {
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return param(format!("beta must be positive and finite, got {}", self.beta));
        }
        if let Some(w) = self.omega {
            if w > spec.k() {
                return param(format!("omega = {w} exceeds K = {}", spec.k()));
            }
        }
        if self.bfs_frontier_cap == Some(0) {
            return param("BFS frontier cap must be at least 1");
        }
        Ok(())
    }
}

/// One SC attempt made by the search.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeVisit {
    pub flips: FlipSet,
    /// Prefix bound that admitted the node; absent for the root.
    pub pm_tmp: Option<f64>,
    /// Full path metric of the node's candidate.
    pub pm: f64,
    /// Best metric after this visit.
    pub pm_best: f64,
}

impl fmt::Display for NodeVisit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "E={} pm_tmp=", self.flips)?;
        match self.pm_tmp {
            Some(v) => write!(f, "{v}")?,
            None => f.write_str("-")?,
        }
        write!(f, " pm={} pm_best={}", self.pm, self.pm_best)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecodeResult {
    pub u_best: Vec<u8>,
    pub pm_best: f64,
    /// SC decodes performed, root included.
    pub sc_attempts: u64,
    /// Children skipped because their prefix bound reached the best metric.
    pub pruned_children: u64,
    pub max_depth_reached: usize,
    /// Empty unless tracing is enabled.
    pub trace: Vec<NodeVisit>,
}

/// Information indices that precede the last frozen bit. Flipping any later
/// bit cannot lower the path metric.
pub fn effective_flip_indices(spec: &CodeSpec) -> Vec<usize> {
    match spec.last_frozen() {
        Some(lf) => spec.info().iter().copied().filter(|&i| i < lf).collect(),
        None => Vec::new(),
    }
}

/// Worst-case SC attempt counts. Values saturate at `u128::MAX`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WorstCaseBounds {
    /// Full tree, `2^K`.
    pub c1: u128,
    /// Depth-limited tree, `Σ_{i≤ω} C(K, i)`.
    pub c2: u128,
    /// Last-frozen restriction alone, `2^(K - K_l)`.
    pub c3: u128,
    /// Both restrictions together; the bound the decoders obey.
    pub effective: u128,
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) is exact; cancel the divisor first so the
        // product only overflows when the result does
        let d = i as u128 + 1;
        let g = gcd(acc, d);
        let num = (n - i) as u128 / (d / g);
        acc = match (acc / g).checked_mul(num) {
            Some(v) => v,
            None => return u128::MAX,
        };
    }
    acc
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn pow2(e: usize) -> u128 {
    if e >= 128 {
        u128::MAX
    } else {
        1u128 << e
    }
}

fn partial_binomial_sum(n: usize, depth: usize) -> u128 {
    (0..=depth.min(n)).fold(0u128, |acc, i| acc.saturating_add(binomial(n, i)))
}

pub fn worst_case_bounds(spec: &CodeSpec, omega: Option<usize>) -> WorstCaseBounds {
    let k = spec.k();
    let flippable = k - spec.k_after_last_frozen();
    let depth = omega.unwrap_or(k);
    WorstCaseBounds {
        c1: pow2(k),
        c2: partial_binomial_sum(k, depth),
        c3: pow2(flippable),
        effective: partial_binomial_sum(flippable, depth),
    }
}

/// Bound on SC attempts for `cfg`, honouring the diagnostic switches.
pub fn attempt_bound(spec: &CodeSpec, cfg: &SearchConfig) -> u128 {
    let b = worst_case_bounds(spec, cfg.omega);
    if cfg.last_frozen_only {
        b.effective
    } else {
        b.c2
    }
}

/// Visit-order metric for the child `flips ∪ {i}`: the flip penalties plus
/// how far each information bit up to `i` falls short of reliability
/// `beta`.
pub fn order_metric(alpha_u: &LlrVector, spec: &CodeSpec, flips: &FlipSet, i: usize, beta: f64) -> Result<f64> {
    if alpha_u.domain() != LlrDomain::BitDecision || alpha_u.len() != spec.n() {
        return param("ordering needs a full vector of bit-decision LLRs");
    }
    if i >= spec.n() || spec.is_frozen(i) {
        return param(format!("bit {i} is not an information bit"));
    }
    flips.check_against(spec)?;
    let a = alpha_u.values();
    let penalty: f64 = flips.indices().iter().map(|&j| a[j].abs()).sum::<f64>() + a[i].abs();
    let shortfall: f64 = spec
        .info()
        .iter()
        .take_while(|&&j| j <= i)
        .map(|&j| (beta - a[j].abs()).max(0.0))
        .sum();
    Ok(penalty + shortfall)
}

/// Ordering metrics for every index in `children` (ascending), sharing the
/// running sums.
fn order_metrics(alpha_u: &[f64], spec: &CodeSpec, flips: &FlipSet, children: &[usize], beta: f64) -> Vec<f64> {
    let base: f64 = flips.indices().iter().map(|&j| alpha_u[j].abs()).sum();
    let info = spec.info();
    let mut shortfall = 0.0;
    let mut next_info = 0;
    children
        .iter()
        .map(|&i| {
            while next_info < info.len() && info[next_info] <= i {
                shortfall += (beta - alpha_u[info[next_info]].abs()).max(0.0);
                next_info += 1;
            }
            base + alpha_u[i].abs() + shortfall
        })
        .collect()
}

/// Sorts `order` by ascending metric; ties keep their existing order.
fn sort_by_metric<T>(items: &mut [(f64, T)]) {
    items.sort_by(|a, b| a.0.total_cmp(&b.0));
}

struct Progress {
    u_best: Vec<u8>,
    pm_best: f64,
    attempts: u64,
    pruned: u64,
    max_depth: usize,
    trace: Vec<NodeVisit>,
}

impl Progress {
    fn offer(&mut self, out: &ScOutput) {
        if out.pm < self.pm_best {
            self.pm_best = out.pm;
            self.u_best.clone_from(&out.u_hat);
        }
    }
}

/// Reusable tree-search decoder for one code and configuration.
#[derive(Debug, Clone)]
pub struct TreeSearchDecoder<'a> {
    spec: &'a CodeSpec,
    cfg: SearchConfig,
    sc: ScDecoder<'a>,
    candidates: Vec<usize>,
    depth_limit: usize,
}

impl<'a> TreeSearchDecoder<'a> {
    pub fn new(spec: &'a CodeSpec, cfg: SearchConfig) -> Result<Self> {
        cfg.validate(spec)?;
        let candidates = if cfg.last_frozen_only {
            effective_flip_indices(spec)
        } else {
            spec.info().to_vec()
        };
        let depth_limit = cfg.omega.unwrap_or(usize::MAX);
        Ok(TreeSearchDecoder {
            spec,
            sc: ScDecoder::new(spec, cfg.llr_mode, cfg.pm_mode),
            cfg,
            candidates,
            depth_limit,
        })
    }

    pub fn config(&self) -> &SearchConfig {
        &self.cfg
    }

    pub fn spec(&self) -> &'a CodeSpec {
        self.spec
    }

    pub fn decode(&mut self, alpha_ch: &LlrVector) -> Result<DecodeResult> {
        if alpha_ch.domain() != LlrDomain::Channel {
            return param("tree search needs channel-domain LLRs");
        }
        if alpha_ch.len() != self.spec.n() {
            return param(format!(
                "received {} LLRs for a length-{} code",
                alpha_ch.len(),
                self.spec.n()
            ));
        }
        let ch = alpha_ch.values();
        let root_flips = FlipSet::empty();
        let (root, root_prefix) = self.sc.decode_with_prefix(ch, &root_flips);
        let mut st = Progress {
            u_best: root.u_hat.clone(),
            pm_best: root.pm,
            attempts: 1,
            pruned: 0,
            max_depth: 0,
            trace: Vec::new(),
        };
        if self.cfg.trace {
            st.trace.push(NodeVisit {
                flips: root_flips.clone(),
                pm_tmp: None,
                pm: root.pm,
                pm_best: st.pm_best,
            });
        }
        match self.cfg.strategy {
            Strategy::Dfs => self.dfs(ch, &root, &root_prefix, &root_flips, &mut st),
            Strategy::Bfs => self.bfs(ch, root, root_prefix, &mut st)?,
        }
        debug_assert!(u128::from(st.attempts) <= attempt_bound(self.spec, &self.cfg));
        Ok(DecodeResult {
            u_best: st.u_best,
            pm_best: st.pm_best,
            sc_attempts: st.attempts,
            pruned_children: st.pruned,
            max_depth_reached: st.max_depth,
            trace: st.trace,
        })
    }

    /// Children of `flips` in visiting order.
    fn children(&self, alpha_u: &[f64], flips: &FlipSet) -> Vec<usize> {
        let start = match flips.max() {
            Some(m) => self.candidates.partition_point(|&i| i <= m),
            None => 0,
        };
        let natural = &self.candidates[start..];
        if !self.cfg.ordered {
            return natural.to_vec();
        }
        let metrics = order_metrics(alpha_u, self.spec, flips, natural, self.cfg.beta);
        let mut keyed: Vec<(f64, usize)> = metrics.into_iter().zip(natural.iter().copied()).collect();
        sort_by_metric(&mut keyed);
        keyed.into_iter().map(|(_, i)| i).collect()
    }

    /// Decodes the child `flips ∪ {i}` admitted by `bound`.
    fn visit(
        &mut self,
        ch: &[f64],
        parent: &FlipSet,
        i: usize,
        bound: f64,
        st: &mut Progress,
    ) -> (FlipSet, ScOutput, PrefixCosts) {
        let flips = parent
            .extended(i)
            .expect("children follow the parent's largest index");
        let (out, prefix) = self.sc.decode_with_prefix(ch, &flips);
        st.attempts += 1;
        st.max_depth = st.max_depth.max(flips.len());
        debug_assert!(out.pm >= bound, "path metric {} below its prefix bound {bound}", out.pm);
        st.offer(&out);
        if self.cfg.trace {
            st.trace.push(NodeVisit {
                flips: flips.clone(),
                pm_tmp: Some(bound),
                pm: out.pm,
                pm_best: st.pm_best,
            });
        }
        (flips, out, prefix)
    }

    fn dfs(&mut self, ch: &[f64], node: &ScOutput, prefix: &PrefixCosts, flips: &FlipSet, st: &mut Progress) {
        if flips.len() >= self.depth_limit {
            return;
        }
        let alpha = node.alpha_u.values();
        debug_assert_eq!(prefix.total(), node.pm);
        for i in self.children(alpha, flips) {
            let bound = prefix.child_bound(alpha, i);
            if self.cfg.prune && !(bound < st.pm_best) {
                st.pruned += 1;
                continue;
            }
            let (child_flips, child, child_prefix) = self.visit(ch, flips, i, bound, st);
            self.dfs(ch, &child, &child_prefix, &child_flips, st);
        }
    }

    fn bfs(&mut self, ch: &[f64], root: ScOutput, root_prefix: PrefixCosts, st: &mut Progress) -> Result<()> {
        struct Entry {
            alpha_u: Vec<f64>,
            flips: FlipSet,
            prefix: PrefixCosts,
        }
        let entry = |out: ScOutput, flips: FlipSet, prefix: PrefixCosts| Entry {
            alpha_u: out.alpha_u.into_values(),
            flips,
            prefix,
        };

        let mut level: Vec<Entry> = Vec::new();
        if self.depth_limit > 0 {
            level.push(entry(root, FlipSet::empty(), root_prefix));
        }
        let mut depth = 0;
        while !level.is_empty() {
            depth += 1;
            let mut queue: Vec<(f64, (usize, usize))> = Vec::new();
            for (p, e) in level.iter().enumerate() {
                let kids = self.children(&e.alpha_u, &e.flips);
                let metrics = if self.cfg.ordered {
                    order_metrics(&e.alpha_u, self.spec, &e.flips, &kids, self.cfg.beta)
                } else {
                    vec![0.0; kids.len()]
                };
                queue.extend(metrics.into_iter().zip(kids).map(|(m, i)| (m, (p, i))));
            }
            if self.cfg.ordered {
                sort_by_metric(&mut queue);
            }

            let mut next: Vec<Entry> = Vec::new();
            for (_, (p, i)) in queue {
                let parent = &level[p];
                let bound = parent.prefix.child_bound(&parent.alpha_u, i);
                if self.cfg.prune && !(bound < st.pm_best) {
                    st.pruned += 1;
                    continue;
                }
                let parent_flips = parent.flips.clone();
                let (flips, out, prefix) = self.visit(ch, &parent_flips, i, bound, st);
                let survives = !self.cfg.prune || bound < st.pm_best;
                if survives && depth < self.depth_limit {
                    if let Some(cap) = self.cfg.bfs_frontier_cap {
                        if next.len() >= cap {
                            return Err(Error::Resource(format!(
                                "BFS frontier exceeded its cap of {cap} nodes at depth {}",
                                depth + 1
                            )));
                        }
                    }
                    next.push(entry(out, flips, prefix));
                }
            }
            level = next;
        }
        Ok(())
    }
}

/// Depth-first search: nested flips are explored before siblings.
pub fn ts_dfs(alpha_ch: &LlrVector, spec: &CodeSpec, cfg: &SearchConfig) -> Result<DecodeResult> {
    if cfg.strategy != Strategy::Dfs {
        return param("ts_dfs needs a depth-first configuration");
    }
    TreeSearchDecoder::new(spec, cfg.clone())?.decode(alpha_ch)
}

/// Breadth-first search: each tree level is finished before the next.
pub fn ts_bfs(alpha_ch: &LlrVector, spec: &CodeSpec, cfg: &SearchConfig) -> Result<DecodeResult> {
    if cfg.strategy != Strategy::Bfs {
        return param("ts_bfs needs a breadth-first configuration");
    }
    TreeSearchDecoder::new(spec, cfg.clone())?.decode(alpha_ch)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{llr_init, modulate};
    use crate::oracle::{correlation, ml_decode_bruteforce};
    use crate::sc::{pm_lower_bound, sc_decode};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rm(m: u32, r: u32) -> CodeSpec {
        CodeSpec::build(m, r).unwrap()
    }

    fn flips_of(trace: &[NodeVisit]) -> Vec<Vec<usize>> {
        trace.iter().map(|v| v.flips.indices().to_vec()).collect()
    }

    fn unpruned(strategy: Strategy) -> SearchConfig {
        SearchConfig {
            strategy,
            trace: true,
            prune: false,
            last_frozen_only: false,
            ..SearchConfig::default()
        }
    }

    #[test]
    fn effective_indices() {
        assert_eq!(effective_flip_indices(&rm(3, 1)), vec![3]);
        assert!(effective_flip_indices(&rm(3, 3)).is_empty());
        assert_eq!(effective_flip_indices(&rm(4, 2)), vec![3, 5, 6, 7]);
    }

    #[test]
    fn bounds_examples() {
        let b = worst_case_bounds(&rm(3, 1), None);
        assert_eq!((b.c1, b.c3, b.effective), (16, 2, 2));
        assert_eq!(worst_case_bounds(&rm(3, 1), Some(2)).c2, 11);
        let b = worst_case_bounds(&rm(7, 3), Some(4));
        let exact: u128 = 1 + 64 + 2016 + 41664 + 635376;
        assert_eq!(b.c2, exact);
        assert_eq!(b.c2, 679_121);
        assert_eq!(b.c1, 1u128 << 64);
        let b = worst_case_bounds(&rm(3, 3), None);
        assert_eq!((b.c3, b.effective), (1, 1));
        assert_eq!(worst_case_bounds(&rm(12, 6), None).c1, u128::MAX);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(64, 4), 635_376);
        assert_eq!(binomial(5, 7), 0);
        assert_eq!(binomial(128, 64), 23_951_146_041_928_082_866_135_587_776_380_551_750);
    }

    #[test]
    fn unpruned_dfs_visit_order() {
        let c = rm(3, 1);
        let ch = LlrVector::channel(vec![2.0; 8]).unwrap();
        let res = ts_dfs(&ch, &c, &unpruned(Strategy::Dfs)).unwrap();
        let expected: Vec<Vec<usize>> = vec![
            vec![],
            vec![3],
            vec![3, 5],
            vec![3, 5, 6],
            vec![3, 5, 6, 7],
            vec![3, 5, 7],
            vec![3, 6],
            vec![3, 6, 7],
            vec![3, 7],
            vec![5],
            vec![5, 6],
            vec![5, 6, 7],
            vec![5, 7],
            vec![6],
            vec![6, 7],
            vec![7],
        ];
        assert_eq!(flips_of(&res.trace), expected);
        assert_eq!(res.sc_attempts, 16);
        assert_eq!(res.max_depth_reached, 4);
    }

    #[test]
    fn unpruned_bfs_visits_levels_in_order() {
        let c = rm(3, 1);
        let ch = LlrVector::channel(vec![2.0; 8]).unwrap();
        let res = ts_bfs(&ch, &c, &unpruned(Strategy::Bfs)).unwrap();
        let visited = flips_of(&res.trace);
        assert_eq!(&visited[..5], &[vec![], vec![3], vec![5], vec![6], vec![7]]);
        assert_eq!(&visited[5..8], &[vec![3, 5], vec![3, 6], vec![3, 7]]);
        let depths: Vec<usize> = visited.iter().map(Vec::len).collect();
        assert!(depths.windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(res.sc_attempts, 16);
    }

    #[test]
    fn depth_limited_unpruned_tree_size() {
        let c = rm(3, 1);
        let ch = LlrVector::channel(vec![2.0; 8]).unwrap();
        for strategy in [Strategy::Dfs, Strategy::Bfs] {
            let cfg = unpruned(strategy).with_omega(Some(2));
            let res = TreeSearchDecoder::new(&c, cfg).unwrap().decode(&ch).unwrap();
            assert_eq!(res.sc_attempts, 11);
        }
    }

    #[test]
    fn noiseless_needs_one_attempt() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for &(m, r) in &[(3, 1), (4, 2), (7, 3)] {
            let c = rm(m, r);
            let msg: Vec<u8> = (0..c.k()).map(|_| rng.gen::<bool>() as u8).collect();
            let ch = llr_init(&modulate(&c.encode(&msg).unwrap()), 0.5).unwrap();
            for cfg in [SearchConfig::dfs(), SearchConfig::bfs()] {
                let res = TreeSearchDecoder::new(&c, cfg.with_ordering(true)).unwrap().decode(&ch).unwrap();
                assert_eq!(res.sc_attempts, 1);
                assert_eq!(res.u_best, c.expand(&msg).unwrap());
                assert_eq!(res.pm_best, 0.0);
            }
        }
    }

    /// A noisy RM(1,3) observation whose unique ML codeword has `u_3 = 1`
    /// while plain SC decides `u_3 = 0`, found by seeded search.
    fn misleading_rm13_frame(c: &CodeSpec) -> (Vec<f64>, Vec<u8>) {
        let x = c.encode(&[1, 0, 0, 0]).unwrap();
        let base = modulate(&x);
        let mut rng = ChaCha8Rng::seed_from_u64(1234);
        for _ in 0..10_000 {
            let y: Vec<f64> = base.iter().map(|s| s + rng.gen_range(-1.6..1.6)).collect();
            let ch = llr_init(&y, 1.0).unwrap();
            let sc = sc_decode(&ch, c, &FlipSet::empty()).unwrap();
            let ml = ml_decode_bruteforce(&y, c).unwrap();
            if ml.tie_count == 1 && ml.x_ml == x && sc.u_hat[3] == 0 {
                return (y, x);
            }
        }
        panic!("no misleading observation found");
    }

    #[test]
    fn single_flip_recovers_ml_codeword() {
        let c = rm(3, 1);
        let (y, x) = misleading_rm13_frame(&c);
        let ch = llr_init(&y, 1.0).unwrap();
        let sc = sc_decode(&ch, &c, &FlipSet::empty()).unwrap();
        let mut sc_x = sc.u_hat.clone();
        crate::code::polar_transform(&mut sc_x);
        assert_ne!(sc_x, x);
        for cfg in [SearchConfig::dfs(), SearchConfig::bfs()] {
            let res = TreeSearchDecoder::new(&c, cfg).unwrap().decode(&ch).unwrap();
            assert_eq!(res.sc_attempts, 2);
            let mut got = res.u_best.clone();
            crate::code::polar_transform(&mut got);
            assert_eq!(got, x);
            assert!(correlation(&got, &y) > correlation(&sc_x, &y));
        }
    }

    #[test]
    fn omega_zero_is_plain_sc() {
        let c = rm(4, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            let ch: Vec<f64> = (0..16).map(|_| rng.gen_range(-2.0..3.0)).collect();
            let ch = LlrVector::channel(ch).unwrap();
            let sc = sc_decode(&ch, &c, &FlipSet::empty()).unwrap();
            for cfg in [SearchConfig::dfs(), SearchConfig::bfs()] {
                let res = TreeSearchDecoder::new(&c, cfg.with_omega(Some(0))).unwrap().decode(&ch).unwrap();
                assert_eq!(res.sc_attempts, 1);
                assert_eq!(res.u_best, sc.u_hat);
                assert_eq!(res.pm_best, sc.pm);
            }
        }
    }

    #[test]
    fn omega_one_visits_same_nodes() {
        let c = rm(5, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..100 {
            let ch: Vec<f64> = (0..32).map(|_| rng.gen_range(-1.5..3.0)).collect();
            let ch = LlrVector::channel(ch).unwrap();
            let run = |cfg: SearchConfig| {
                let cfg = SearchConfig { trace: true, ..cfg.with_omega(Some(1)) };
                TreeSearchDecoder::new(&c, cfg).unwrap().decode(&ch).unwrap()
            };
            let d = run(SearchConfig::dfs());
            let b = run(SearchConfig::bfs());
            assert_eq!(flips_of(&d.trace), flips_of(&b.trace));
            assert_eq!(d.pm_best, b.pm_best);
        }
    }

    #[test]
    fn order_metric_examples() {
        let c = rm(3, 1);
        // info bits 3 and 5 have |alpha| 1.0 and 0.5
        let mut a = vec![2.0; 8];
        a[3] = 1.0;
        a[5] = -0.5;
        let a = LlrVector::bit_decision_unchecked(a);
        let m = order_metric(&a, &c, &FlipSet::empty(), 5, 0.8).unwrap();
        assert!((m - 0.8).abs() < 1e-15);
        let big = LlrVector::bit_decision_unchecked(vec![3.0; 8]);
        let e = FlipSet::new(vec![3]).unwrap();
        assert_eq!(order_metric(&big, &c, &e, 6, 0.8).unwrap(), 6.0);
        assert!(order_metric(&big, &c, &e, 4, 0.8).is_err());
    }

    #[test]
    fn zero_beta_ordering_matches_bound_ordering() {
        let c = rm(5, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..100 {
            let a: Vec<f64> = (0..32)
                .map(|i| {
                    let v: f64 = rng.gen_range(0.01..4.0);
                    if c.is_frozen(i) || rng.gen::<bool>() {
                        v
                    } else {
                        -v
                    }
                })
                .collect();
            let a = LlrVector::bit_decision_unchecked(a);
            let first = c.info()[0];
            let e = FlipSet::new(vec![first]).unwrap();
            let kids: Vec<usize> = c.info().iter().copied().filter(|&i| i > first).collect();
            let mut by_metric = kids.clone();
            by_metric.sort_by(|&x, &y| {
                let mx = order_metric(&a, &c, &e, x, 0.0).unwrap();
                let my = order_metric(&a, &c, &e, y, 0.0).unwrap();
                mx.total_cmp(&my)
            });
            let mut by_bound = kids.clone();
            by_bound.sort_by(|&x, &y| {
                let bx = pm_lower_bound(&a, &c, &e, x, PmMode::Hard).unwrap();
                let by = pm_lower_bound(&a, &c, &e, y, PmMode::Hard).unwrap();
                bx.total_cmp(&by)
            });
            assert_eq!(by_metric, by_bound);
        }
    }

    #[test]
    fn batched_order_metrics_match_single() {
        let c = rm(5, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(78);
        let a: Vec<f64> = (0..32).map(|_| rng.gen_range(-1.5..1.5)).collect();
        let e = FlipSet::new(vec![c.info()[1]]).unwrap();
        let kids: Vec<usize> = c.info().iter().copied().filter(|&i| i > c.info()[1]).collect();
        let batch = order_metrics(&a, &c, &e, &kids, 0.8);
        let av = LlrVector::bit_decision_unchecked(a.clone());
        for (&i, &m) in kids.iter().zip(&batch) {
            assert!((order_metric(&av, &c, &e, i, 0.8).unwrap() - m).abs() < 1e-12);
        }
    }

    #[test]
    fn frontier_cap_is_a_hard_error() {
        let c = rm(3, 1);
        let ch = LlrVector::channel(vec![2.0; 8]).unwrap();
        let cfg = SearchConfig {
            bfs_frontier_cap: Some(2),
            ..unpruned(Strategy::Bfs)
        };
        let err = TreeSearchDecoder::new(&c, cfg).unwrap().decode(&ch).unwrap_err();
        assert!(matches!(err, Error::Resource(_)));
    }

    #[test]
    fn config_validation() {
        let c = rm(3, 1);
        assert!(TreeSearchDecoder::new(&c, SearchConfig::dfs().with_omega(Some(5))).is_err());
        assert!(TreeSearchDecoder::new(&c, SearchConfig { beta: 0.0, ..SearchConfig::dfs() }).is_err());
        let ch = LlrVector::channel(vec![1.0; 8]).unwrap();
        assert!(ts_dfs(&ch, &c, &SearchConfig::bfs()).is_err());
        assert!(ts_bfs(&ch, &c, &SearchConfig::dfs()).is_err());
        let short = LlrVector::channel(vec![1.0; 4]).unwrap();
        assert!(ts_dfs(&short, &c, &SearchConfig::dfs()).is_err());
    }

    #[test]
    fn trace_lines() {
        let v = NodeVisit {
            flips: FlipSet::new(vec![3, 5]).unwrap(),
            pm_tmp: Some(0.5),
            pm: 1.25,
            pm_best: 0.75,
        };
        assert_eq!(v.to_string(), "E={3,5} pm_tmp=0.5 pm=1.25 pm_best=0.75");
        let root = NodeVisit {
            flips: FlipSet::empty(),
            pm_tmp: None,
            pm: 0.0,
            pm_best: 0.0,
        };
        assert_eq!(root.to_string(), "E={} pm_tmp=- pm=0 pm_best=0");
    }
}
