//! Past-event index and endogenous network statistics with exponential
//! half-life decay.
//!
//! All statistics are evaluated strictly on the past: an event at time
//! `t_e` contributes to a query at time `t` only if `t_e < t`, so
//! same-day events never influence each other. Decayed weights are
//! recomputed from occurrence lists at query time; sums are compensated
//! so the brute-force oracle agrees to 1e-12.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::{ActorId, ActorType, BeliefId, Stance};
use crate::error::StatError;

/// Half-life of the exponential decay, in active clock units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfLife(f64);

impl HalfLife {
    pub fn new(value: f64) -> Result<HalfLife, StatError> {
        if value > 0.0 && value.is_finite() {
            Ok(HalfLife(value))
        } else {
            Err(StatError::NonPositiveHalfLife(value))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Decay rate ln(2)/T½.
    pub fn rate(self) -> f64 {
        std::f64::consts::LN_2 / self.0
    }
}

/// Evaluation switches for the index-set reading of the statistics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatOptions {
    /// When true, reciprocity sums run over all i and j and popularity and
    /// the share statistics include the focal actor, matching the formulas
    /// verbatim. Default excludes i = a and j = b.
    pub literal_index_sets: bool,
}

impl Default for StatOptions {
    fn default() -> Self {
        StatOptions {
            literal_index_sets: false,
        }
    }
}

/// Compensated (Kahan-Neumaier) accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.comp += (self.sum - t) + value;
        } else {
            self.comp += (value - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn total(self) -> f64 {
        self.sum + self.comp
    }
}

/// Append-only index over past events, keyed by (actor, belief, stance).
///
/// Holds exactly the events with `t_e < cutoff_time`. For a fixed cutoff the
/// index is immutable and statistic evaluation is a pure function, so it can
/// be shared across threads; advancing the cutoff is a single-writer step.
#[derive(Debug, Clone)]
pub struct PastIndex {
    n_actors: usize,
    n_beliefs: usize,
    occurrences: HashMap<(ActorId, BeliefId, Stance), Vec<f64>>,
    actor_adj: Vec<Vec<(BeliefId, Stance)>>,
    belief_adj: Vec<Vec<(ActorId, Stance)>>,
    cutoff_time: f64,
}

impl PastIndex {
    pub fn new(n_actors: usize, n_beliefs: usize) -> PastIndex {
        PastIndex {
            n_actors,
            n_beliefs,
            occurrences: HashMap::new(),
            actor_adj: vec![Vec::new(); n_actors],
            belief_adj: vec![Vec::new(); n_beliefs],
            cutoff_time: f64::NEG_INFINITY,
        }
    }

    pub fn n_actors(&self) -> usize {
        self.n_actors
    }

    pub fn n_beliefs(&self) -> usize {
        self.n_beliefs
    }

    pub fn cutoff_time(&self) -> f64 {
        self.cutoff_time
    }

    /// Append one event. Times must be appended in nondecreasing order.
    pub fn push(&mut self, time: f64, actor: ActorId, belief: BeliefId, stance: Stance) {
        let key = (actor, belief, stance);
        let times = self.occurrences.entry(key).or_insert_with(|| {
            self.actor_adj[actor.0 as usize].push((belief, stance));
            self.belief_adj[belief.0 as usize].push((actor, stance));
            Vec::new()
        });
        debug_assert!(times.last().map_or(true, |&last| last <= time));
        times.push(time);
    }

    /// Move the cutoff forward. Weights queried at earlier times are
    /// unaffected because queries filter on `t_e < t`.
    pub fn advance_cutoff(&mut self, t: f64) {
        debug_assert!(t >= self.cutoff_time || self.cutoff_time == f64::NEG_INFINITY);
        self.cutoff_time = t;
    }

    fn times(&self, actor: ActorId, belief: BeliefId, stance: Stance) -> &[f64] {
        self.occurrences
            .get(&(actor, belief, stance))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    /// True if (actor, belief, stance) occurred strictly before `t`,
    /// ignoring decay. This is the unweighted indicator of the learning
    /// statistic.
    pub fn occurred_before(&self, t: f64, actor: ActorId, belief: BeliefId, stance: Stance) -> bool {
        self.times(actor, belief, stance)
            .first()
            .map_or(false, |&first| first < t)
    }
}

/// Decayed edge weight: sum over occurrences of (i, j, s) strictly before
/// `t` of `exp(-(t - t_e) * ln2/h) * ln2/h`.
pub fn decay_weight(
    index: &PastIndex,
    t: f64,
    actor: ActorId,
    belief: BeliefId,
    stance: Stance,
    h: HalfLife,
) -> f64 {
    debug_assert!(t <= index.cutoff_time);
    let rate = h.rate();
    let times = index.times(actor, belief, stance);
    let upto = times.partition_point(|&te| te < t);
    let mut acc = KahanSum::default();
    for &te in &times[..upto] {
        acc.add((-(t - te) * rate).exp() * rate);
    }
    acc.total()
}

fn weight_stances(
    index: &PastIndex,
    t: f64,
    actor: ActorId,
    belief: BeliefId,
    stances: &[Stance],
    h: HalfLife,
) -> f64 {
    stances
        .iter()
        .map(|&s| decay_weight(index, t, actor, belief, s, h))
        .sum()
}

/// Which (i, b) weight the signed-split statistics use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignMode {
    /// The stance of the candidate event under evaluation.
    Candidate,
    /// Fixed positive sign (type-model split).
    Positive,
    /// Fixed negative sign (type-model split).
    Negative,
    /// Sum of both signs (unsigned control variants).
    Unsigned,
}

impl SignMode {
    fn stances(self, candidate: Stance) -> &'static [Stance] {
        match self {
            SignMode::Candidate => match candidate {
                Stance::Positive => &[Stance::Positive],
                Stance::Negative => &[Stance::Negative],
            },
            SignMode::Positive => &[Stance::Positive],
            SignMode::Negative => &[Stance::Negative],
            SignMode::Unsigned => &Stance::BOTH,
        }
    }
}

/// One balanced/unbalanced four-cycle term: sum over i and j of
/// `w^{aj_sign}(a, j) * w_ib(i) * w^{ij_sign}(i, j)`.
fn cycle_sum(
    index: &PastIndex,
    t: f64,
    a: ActorId,
    b: BeliefId,
    aj_sign: Stance,
    ij_sign: Stance,
    ib_stances: &[Stance],
    h: HalfLife,
    opts: StatOptions,
) -> f64 {
    // Weights of the focal actor's (a, j) edges with the requested sign.
    let mut a_weights: HashMap<BeliefId, f64> = HashMap::new();
    for &(j, s) in &index.actor_adj[a.0 as usize] {
        if s != aj_sign || (!opts.literal_index_sets && j == b) {
            continue;
        }
        let w = decay_weight(index, t, a, j, aj_sign, h);
        if w > 0.0 {
            a_weights.insert(j, w);
        }
    }
    if a_weights.is_empty() {
        return 0.0;
    }

    let mut outer = KahanSum::default();
    let mut seen_i: Vec<ActorId> = Vec::new();
    for &(i, _) in &index.belief_adj[b.0 as usize] {
        if !opts.literal_index_sets && i == a {
            continue;
        }
        if seen_i.contains(&i) {
            continue;
        }
        seen_i.push(i);
        let w_ib = weight_stances(index, t, i, b, ib_stances, h);
        if w_ib == 0.0 {
            continue;
        }
        let mut inner = KahanSum::default();
        for &(j, s) in &index.actor_adj[i.0 as usize] {
            if s != ij_sign {
                continue;
            }
            if let Some(&w_aj) = a_weights.get(&j) {
                let w_ij = decay_weight(index, t, i, j, ij_sign, h);
                inner.add(w_aj * w_ij);
            }
        }
        outer.add(w_ib * inner.total());
    }
    outer.total()
}

/// Positive reciprocity: decayed count of balanced four-cycles around
/// (a, b), cube-rooted per congruence sign.
pub fn positive_reciprocity(
    index: &PastIndex,
    t: f64,
    a: ActorId,
    b: BeliefId,
    ib: SignMode,
    candidate: Stance,
    h: HalfLife,
    opts: StatOptions,
) -> f64 {
    let ib_stances = ib.stances(candidate);
    let pos = cycle_sum(index, t, a, b, Stance::Positive, Stance::Positive, ib_stances, h, opts);
    let neg = cycle_sum(index, t, a, b, Stance::Negative, Stance::Negative, ib_stances, h, opts);
    pos.cbrt() + neg.cbrt()
}

/// Negative reciprocity: decayed count of conflict four-cycles, with the
/// (a, j) and (i, j) signs mixed.
pub fn negative_reciprocity(
    index: &PastIndex,
    t: f64,
    a: ActorId,
    b: BeliefId,
    ib: SignMode,
    candidate: Stance,
    h: HalfLife,
    opts: StatOptions,
) -> f64 {
    let ib_stances = ib.stances(candidate);
    let pn = cycle_sum(index, t, a, b, Stance::Positive, Stance::Negative, ib_stances, h, opts);
    let np = cycle_sum(index, t, a, b, Stance::Negative, Stance::Positive, ib_stances, h, opts);
    pn.cbrt() + np.cbrt()
}

/// Innovation learning: share-normalized adoption of `b` from minimally
/// congruent other actors. Congruence indicators are unweighted existence
/// tests over the strict past; the denominator is the guarded count of
/// other actors who previously stated `b` with the congruence sign.
pub fn innovation_learning(
    index: &PastIndex,
    t: f64,
    a: ActorId,
    b: BeliefId,
    ib: SignMode,
    candidate: Stance,
    h: HalfLife,
    _opts: StatOptions,
) -> f64 {
    let ib_stances = ib.stances(candidate);

    let mut result = 0.0;
    for congruence in Stance::BOTH {
        // zeta: other actors who stated b with the congruence sign before t.
        let mut zeta = 0usize;
        let mut counted: Vec<ActorId> = Vec::new();
        for &(i, s) in &index.belief_adj[b.0 as usize] {
            if i == a || s != congruence || counted.contains(&i) {
                continue;
            }
            if index.occurred_before(t, i, b, congruence) {
                zeta += 1;
                counted.push(i);
            }
        }
        let eta = zeta.max(1) as f64;

        // Beliefs j != b the focal actor stated with the congruence sign.
        let a_beliefs: Vec<BeliefId> = index.actor_adj[a.0 as usize]
            .iter()
            .filter(|&&(j, s)| s == congruence && j != b && index.occurred_before(t, a, j, congruence))
            .map(|&(j, _)| j)
            .collect();
        if a_beliefs.is_empty() {
            continue;
        }

        let mut num = KahanSum::default();
        let mut seen_i: Vec<ActorId> = Vec::new();
        for &(i, _) in &index.belief_adj[b.0 as usize] {
            if i == a || seen_i.contains(&i) {
                continue;
            }
            seen_i.push(i);
            let w_ib = weight_stances(index, t, i, b, ib_stances, h);
            if w_ib == 0.0 {
                continue;
            }
            let shared = a_beliefs
                .iter()
                .filter(|&&j| index.occurred_before(t, i, j, congruence))
                .count();
            num.add(w_ib * shared as f64);
        }
        result += num.total().cbrt() / eta;
    }
    result
}

/// Inertia: decayed count of the focal actor's own past statements of `b`,
/// optionally restricted by sign.
pub fn inertia(
    index: &PastIndex,
    t: f64,
    a: ActorId,
    b: BeliefId,
    sign: SignMode,
    candidate: Stance,
    h: HalfLife,
) -> f64 {
    weight_stances(index, t, a, b, sign.stances(candidate), h)
}

/// Actor activity: decayed count of all past statements by `a`, any belief,
/// any sign.
pub fn actor_activity(index: &PastIndex, t: f64, a: ActorId, h: HalfLife) -> f64 {
    let mut acc = KahanSum::default();
    for &(j, s) in &index.actor_adj[a.0 as usize] {
        acc.add(decay_weight(index, t, a, j, s, h));
    }
    acc.total()
}

/// Belief popularity: decayed count of past statements of `b` by other
/// actors (all actors in literal mode), optionally restricted by sign.
pub fn belief_popularity(
    index: &PastIndex,
    t: f64,
    a: ActorId,
    b: BeliefId,
    sign: SignMode,
    candidate: Stance,
    h: HalfLife,
    opts: StatOptions,
) -> f64 {
    let stances = sign.stances(candidate);
    let mut acc = KahanSum::default();
    let mut seen: Vec<ActorId> = Vec::new();
    for &(i, _) in &index.belief_adj[b.0 as usize] {
        if (!opts.literal_index_sets && i == a) || seen.contains(&i) {
            continue;
        }
        seen.push(i);
        acc.add(weight_stances(index, t, i, b, stances, h));
    }
    acc.total()
}

fn share_statistic<F>(
    index: &PastIndex,
    t: f64,
    a: ActorId,
    b: BeliefId,
    stances: &[Stance],
    h: HalfLife,
    opts: StatOptions,
    numerator_flag: F,
) -> f64
where
    F: Fn(ActorId) -> f64,
{
    let mut num = KahanSum::default();
    let mut den = KahanSum::default();
    let mut seen: Vec<ActorId> = Vec::new();
    for &(i, _) in &index.belief_adj[b.0 as usize] {
        if (!opts.literal_index_sets && i == a) || seen.contains(&i) {
            continue;
        }
        seen.push(i);
        let w = weight_stances(index, t, i, b, stances, h);
        if w == 0.0 {
            continue;
        }
        den.add(w);
        num.add(w * numerator_flag(i));
    }
    let den = den.total();
    if den == 0.0 {
        0.0
    } else {
        num.total() / den
    }
}

/// Share of the popularity weight of `b` contributed by actors of the same
/// type as `a`. Zero when nobody stated `b`.
pub fn homophily_share(
    index: &PastIndex,
    t: f64,
    a: ActorId,
    b: BeliefId,
    sign: SignMode,
    candidate: Stance,
    h: HalfLife,
    opts: StatOptions,
    actor_types: &[ActorType],
) -> f64 {
    let own = actor_types[a.0 as usize];
    share_statistic(index, t, a, b, sign.stances(candidate), h, opts, |i| {
        if actor_types[i.0 as usize] == own {
            1.0
        } else {
            0.0
        }
    })
}

/// Share of the popularity weight of `b` contributed by the focal actor's
/// exogenous opponents (trade-union/social vs liberal/financial camps).
/// Zero when `a` belongs to neither camp or nobody stated `b`.
pub fn heterophily_share(
    index: &PastIndex,
    t: f64,
    a: ActorId,
    b: BeliefId,
    sign: SignMode,
    candidate: Stance,
    h: HalfLife,
    opts: StatOptions,
    actor_types: &[ActorType],
) -> f64 {
    let social = |ty: ActorType| ty == ActorType::TradeUnionSocial;
    let liberal = |ty: ActorType| matches!(ty, ActorType::EmployerLiberal | ActorType::Financial);
    let x_a = social(actor_types[a.0 as usize]);
    let y_a = liberal(actor_types[a.0 as usize]);
    if !x_a && !y_a {
        return 0.0;
    }
    share_statistic(index, t, a, b, sign.stances(candidate), h, opts, |i| {
        let ty = actor_types[i.0 as usize];
        let mut flag = 0.0;
        if x_a && liberal(ty) {
            flag += 1.0;
        }
        if y_a && social(ty) {
            flag += 1.0;
        }
        flag
    })
}

/// Base statistic kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StatName {
    PositiveReciprocity,
    InnovationLearning,
    NegativeReciprocity,
    Inertia,
    Activity,
    Popularity,
    Homophily,
    Heterophily,
}

impl StatName {
    fn base_token(self) -> &'static str {
        match self {
            StatName::PositiveReciprocity => "positive_reciprocity",
            StatName::InnovationLearning => "innovation_learning",
            StatName::NegativeReciprocity => "negative_reciprocity",
            StatName::Inertia => "inertia",
            StatName::Activity => "activity",
            StatName::Popularity => "popularity",
            StatName::Homophily => "homophily",
            StatName::Heterophily => "heterophily",
        }
    }
}

/// One named statistic column: a base statistic plus its sign mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct StatColumn {
    pub name: StatName,
    pub sign: SignMode,
}

impl StatColumn {
    pub fn new(name: StatName, sign: SignMode) -> StatColumn {
        StatColumn { name, sign }
    }

    /// The rate-model statistic set of the main analysis.
    pub fn rate_set() -> Vec<StatColumn> {
        use SignMode::*;
        use StatName::*;
        vec![
            StatColumn::new(PositiveReciprocity, Candidate),
            StatColumn::new(InnovationLearning, Candidate),
            StatColumn::new(NegativeReciprocity, Candidate),
            StatColumn::new(Inertia, Unsigned),
            StatColumn::new(Activity, Unsigned),
            StatColumn::new(Popularity, Unsigned),
        ]
    }

    /// The signed-split statistic set of the type model.
    pub fn type_set() -> Vec<StatColumn> {
        use SignMode::*;
        use StatName::*;
        vec![
            StatColumn::new(PositiveReciprocity, Positive),
            StatColumn::new(PositiveReciprocity, Negative),
            StatColumn::new(InnovationLearning, Positive),
            StatColumn::new(InnovationLearning, Negative),
            StatColumn::new(NegativeReciprocity, Positive),
            StatColumn::new(NegativeReciprocity, Negative),
            StatColumn::new(Inertia, Positive),
            StatColumn::new(Inertia, Negative),
            StatColumn::new(Popularity, Positive),
            StatColumn::new(Popularity, Negative),
        ]
    }

    /// Homophily/heterophily share columns of the robustness models.
    pub fn share_set() -> Vec<StatColumn> {
        use SignMode::*;
        use StatName::*;
        vec![
            StatColumn::new(Homophily, Positive),
            StatColumn::new(Homophily, Negative),
            StatColumn::new(Heterophily, Positive),
            StatColumn::new(Heterophily, Negative),
        ]
    }
}

impl fmt::Display for StatColumn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let suffix = match self.sign {
            SignMode::Candidate => "_cand",
            SignMode::Positive => "_pos",
            SignMode::Negative => "_neg",
            SignMode::Unsigned => "_both",
        };
        if self.name == StatName::Activity {
            write!(f, "{}", self.name.base_token())
        } else {
            write!(f, "{}{}", self.name.base_token(), suffix)
        }
    }
}

impl FromStr for StatColumn {
    type Err = StatError;

    fn from_str(s: &str) -> Result<StatColumn, StatError> {
        let (base, sign) = if let Some(base) = s.strip_suffix("_cand") {
            (base, Some(SignMode::Candidate))
        } else if let Some(base) = s.strip_suffix("_pos") {
            (base, Some(SignMode::Positive))
        } else if let Some(base) = s.strip_suffix("_neg") {
            (base, Some(SignMode::Negative))
        } else if let Some(base) = s.strip_suffix("_both") {
            (base, Some(SignMode::Unsigned))
        } else {
            (s, None)
        };
        let name = match base {
            "positive_reciprocity" => StatName::PositiveReciprocity,
            "innovation_learning" => StatName::InnovationLearning,
            "negative_reciprocity" => StatName::NegativeReciprocity,
            "inertia" => StatName::Inertia,
            "activity" => StatName::Activity,
            "popularity" => StatName::Popularity,
            "homophily" => StatName::Homophily,
            "heterophily" => StatName::Heterophily,
            _ => return Err(StatError::UnknownStatistic(s.to_string())),
        };
        // Bare names get the default sign mode of the rate model.
        let sign = sign.unwrap_or(match name {
            StatName::Inertia | StatName::Popularity | StatName::Activity => SignMode::Unsigned,
            _ => SignMode::Candidate,
        });
        Ok(StatColumn { name, sign })
    }
}

impl TryFrom<String> for StatColumn {
    type Error = StatError;
    fn try_from(s: String) -> Result<StatColumn, StatError> {
        s.parse()
    }
}

impl From<StatColumn> for String {
    fn from(c: StatColumn) -> String {
        c.to_string()
    }
}

/// Evaluate one statistic column at a candidate event (t, a, b, s).
#[allow(clippy::too_many_arguments)]
pub fn evaluate(
    column: StatColumn,
    index: &PastIndex,
    t: f64,
    a: ActorId,
    b: BeliefId,
    candidate: Stance,
    h: HalfLife,
    opts: StatOptions,
    actor_types: &[ActorType],
) -> f64 {
    match column.name {
        StatName::PositiveReciprocity => {
            positive_reciprocity(index, t, a, b, column.sign, candidate, h, opts)
        }
        StatName::InnovationLearning => {
            innovation_learning(index, t, a, b, column.sign, candidate, h, opts)
        }
        StatName::NegativeReciprocity => {
            negative_reciprocity(index, t, a, b, column.sign, candidate, h, opts)
        }
        StatName::Inertia => inertia(index, t, a, b, column.sign, candidate, h),
        StatName::Activity => actor_activity(index, t, a, h),
        StatName::Popularity => belief_popularity(index, t, a, b, column.sign, candidate, h, opts),
        StatName::Homophily => {
            homophily_share(index, t, a, b, column.sign, candidate, h, opts, actor_types)
        }
        StatName::Heterophily => {
            heterophily_share(index, t, a, b, column.sign, candidate, h, opts, actor_types)
        }
    }
}

/// Evaluate every column of `spec` at (t, a, b, s). Raw, unstandardized.
#[allow(clippy::too_many_arguments)]
pub fn statistic_vector(
    index: &PastIndex,
    t: f64,
    a: ActorId,
    b: BeliefId,
    candidate: Stance,
    spec: &[StatColumn],
    h: HalfLife,
    opts: StatOptions,
    actor_types: &[ActorType],
) -> Vec<f64> {
    spec.iter()
        .map(|&c| evaluate(c, index, t, a, b, candidate, h, opts, actor_types))
        .collect()
}
