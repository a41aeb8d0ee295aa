//! The full multi-target attack: width selection, table rounds, collision
//! harvest, congruence accumulation, system solving with candidate
//! verification, retry on deficient rank, and the subgroup (CRT) reduction.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::io::BufRead;

use serde::Serialize;

use crate::arith::{ceil_sqrt, ceil_sqrt_ratio, derive_seed};
use crate::collision::{
    build_omega, collisions_to_congruences, find_collisions, sample_exponents, CollisionError,
    ExponentMode,
};
use crate::group::{CyclicGroup, GroupError, TargetKey};
use crate::modlinalg::{
    crt_combine, solve_system_mod, CongruenceSystem, Factorization, ModLinAlgError, RankTracker,
};
use thiserror::Error;

/// Documented default seed; bare invocations are reproducible.
pub const DEFAULT_SEED: u64 = 0x5EED;

#[derive(Debug, Error)]
pub enum AttackError {
    #[error("attack budget exhausted with {} of {} keys recovered", partial.recovered.len(), partial.target_count)]
    Exhausted { partial: Box<AttackReport> },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("invalid instance: {0}")]
    Instance(String),
    #[error("table of {entries} entries exceeds budget {budget}")]
    TableBudget { entries: u128, budget: usize },
    #[error("prime power {0} exceeds the 2^40 subgroup budget")]
    SubgroupTooLarge(u128),
    #[error(transparent)]
    Collision(#[from] CollisionError),
    #[error(transparent)]
    Solver(#[from] ModLinAlgError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// Width-selection strategy for the power tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// `n = ceil(sqrt(N)) + 1`
    Full,
    /// `n = ceil(sqrt(2N/(m+1))) + 1`
    Reduced,
}

/// Default policy: full width for few targets, reduced once the reduced
/// bound starts to bite.
pub fn default_strategy(targets: usize) -> Strategy {
    if targets < 4 {
        Strategy::Full
    } else {
        Strategy::Reduced
    }
}

/// Table width for the given strategy, clamped into `[1, N-1]`.
pub fn choose_n(order: u128, targets: usize, strategy: Strategy) -> usize {
    assert!(order >= 2 && targets >= 1);
    let n = match strategy {
        Strategy::Full => ceil_sqrt(order) + 1,
        Strategy::Reduced => ceil_sqrt_ratio(2 * order, targets as u128 + 1) + 1,
    };
    n.clamp(1, order - 1) as usize
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttackParams {
    pub strategy: Strategy,
    /// Explicit table width; applies to the direct attack only (the
    /// subgroup reduction re-derives widths per subgroup).
    pub n_override: Option<usize>,
    pub max_rounds: u32,
    pub seed: u64,
    pub coprime_exponents: bool,
    /// Upper bound on `(m+1) * n` table entries.
    pub max_table_entries: usize,
}

impl Default for AttackParams {
    fn default() -> Self {
        AttackParams {
            strategy: Strategy::Full,
            n_override: None,
            max_rounds: 8,
            seed: DEFAULT_SEED,
            coprime_exponents: false,
            max_table_entries: 1 << 26,
        }
    }
}

/// Outcome of an attack. `group_multiplications` counts the multiplications
/// spent raising elements to exponents (table construction and, for the
/// subgroup path, projections) - the algorithm's cost model; verification
/// exponentiations are not charged. Every table entry is charged at least
/// one multiplication.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttackReport {
    pub recovered: BTreeMap<usize, u128>,
    pub target_count: usize,
    pub rounds_used: u32,
    pub collisions_per_round: Vec<u64>,
    pub congruences_used: usize,
    pub group_multiplications: u64,
    pub comparisons: u64,
    pub verified: bool,
}

#[derive(Serialize)]
struct ReportJson {
    recovered: BTreeMap<String, u64>,
    rounds: u32,
    verified: bool,
    mults: u64,
    comparisons: u64,
}

impl AttackReport {
    /// The wire format written by the CLI:
    /// `{"recovered": {"1": x1, ...}, "rounds": r, "verified": b, "mults": c1, "comparisons": c2}`.
    pub fn to_json(&self) -> String {
        let recovered = self
            .recovered
            .iter()
            .map(|(&i, &x)| {
                (
                    i.to_string(),
                    u64::try_from(x).expect("desk-scale exponent"),
                )
            })
            .collect();
        serde_json::to_string(&ReportJson {
            recovered,
            rounds: self.rounds_used,
            verified: self.verified,
            mults: self.group_multiplications,
            comparisons: self.comparisons,
        })
        .expect("report serialization cannot fail")
    }

    fn empty(target_count: usize) -> Self {
        AttackReport {
            recovered: BTreeMap::new(),
            target_count,
            rounds_used: 0,
            collisions_per_round: Vec::new(),
            congruences_used: 0,
            group_multiplications: 0,
            comparisons: 0,
            verified: false,
        }
    }
}

/// True iff `pow(g, candidate[i]) = y_i` for every target, with every entry
/// already reduced into `[0, N-1]`.
pub fn verify_solution(group: &CyclicGroup, targets: &[TargetKey], candidate: &[u128]) -> bool {
    if candidate.len() != targets.len() {
        return false;
    }
    targets
        .iter()
        .zip(candidate)
        .all(|(t, &x)| x < group.order() && group.pow(group.generator(), x) == t.value)
}

fn validate_targets(group: &CyclicGroup, targets: &[TargetKey]) -> Result<(), AttackError> {
    if targets.is_empty() {
        return Err(AttackError::InvalidParams("no targets".into()));
    }
    for (pos, t) in targets.iter().enumerate() {
        if t.index != pos + 1 {
            return Err(AttackError::Instance(format!(
                "target indices must be 1..={} in order",
                targets.len()
            )));
        }
        if !group.is_member(t.value) {
            return Err(AttackError::Instance(format!(
                "target {} is not a member of the group",
                t.index
            )));
        }
    }
    Ok(())
}

/// Runs the birthday attack: up to `max_rounds` rounds of fresh exponent
/// tables, accumulating congruences across rounds, solving the system mod N
/// after each round, and filtering enumerated candidates by exponentiation.
/// Identity keys are answered immediately and duplicate keys are collapsed
/// to one representative before any table is built.
pub fn run_attack(
    group: &CyclicGroup,
    targets: &[TargetKey],
    params: &AttackParams,
) -> Result<AttackReport, AttackError> {
    validate_targets(group, targets)?;
    let m = targets.len();
    let order = group.order();
    let mut report = AttackReport::empty(m);

    // Pre-filter: identity keys have exponent 0; duplicate keys share one
    // representative row.
    let mut rep_by_residue: HashMap<u128, usize> = HashMap::new();
    let mut dup_of: Vec<(usize, usize)> = Vec::new();
    let mut effective: Vec<TargetKey> = Vec::new();
    let mut orig_index: Vec<usize> = Vec::new();
    for t in targets {
        if t.value == group.identity() {
            report.recovered.insert(t.index, 0);
        } else if let Some(&rep) = rep_by_residue.get(&t.value.residue()) {
            dup_of.push((t.index, rep));
        } else {
            rep_by_residue.insert(t.value.residue(), t.index);
            orig_index.push(t.index);
            effective.push(TargetKey {
                index: effective.len() + 1,
                value: t.value,
            });
        }
    }

    let m_eff = effective.len();
    if m_eff > 0 {
        let n = match params.n_override {
            Some(n) => {
                if n as u128 > order - 1 || n == 0 {
                    return Err(AttackError::InvalidParams(format!(
                        "width override {n} outside [1, {}]",
                        order - 1
                    )));
                }
                n
            }
            None => choose_n(order, m_eff, params.strategy),
        };
        let entries = (m_eff as u128 + 1) * n as u128;
        if entries > params.max_table_entries as u128 {
            return Err(AttackError::TableBudget {
                entries,
                budget: params.max_table_entries,
            });
        }
        let factorization = Factorization::from_parts(group.order_factorization().to_vec())?;
        let mode = if params.coprime_exponents {
            ExponentMode::CoprimeToOrder
        } else {
            ExponentMode::NonZero
        };
        let mut system = CongruenceSystem::new(m_eff, order);
        let mut tracker = RankTracker::new(m_eff, order, &factorization);
        let mut resolved: Vec<Option<u128>> = vec![None; m_eff];
        let mut rejected: Vec<HashSet<u128>> = vec![HashSet::new(); m_eff];
        if params.max_rounds == 0 {
            return Err(AttackError::InvalidParams(
                "max_rounds must be at least 1".into(),
            ));
        }
        for round in 1..=params.max_rounds {
            report.rounds_used = round;
            let round_seed = derive_seed(params.seed, round as u64);
            let exponents = sample_exponents(order, m_eff, n, round_seed, mode)?;
            let omega = build_omega(group, &effective, &exponents)?;
            report.group_multiplications += omega.multiplications;
            let scan = find_collisions(&omega);
            report.comparisons += scan.comparisons;
            report
                .collisions_per_round
                .push(scan.collisions.len() as u64);
            let congruences = collisions_to_congruences(&scan.collisions, &exponents, order)?;
            for c in congruences {
                tracker.add_row(c.clone())?;
                system.push(c)?;
            }
            report.congruences_used = system.rows().len();
            let solution = solve_system_mod(&system, &factorization)?;
            for vector in solution.vectors() {
                for (pos, &value) in vector.iter().enumerate() {
                    if resolved[pos].is_some() || rejected[pos].contains(&value) {
                        continue;
                    }
                    if group.pow(group.generator(), value) == effective[pos].value {
                        resolved[pos] = Some(value);
                    } else {
                        rejected[pos].insert(value);
                    }
                }
            }
            if resolved.iter().all(Option::is_some) {
                break;
            }
        }
        for (pos, x) in resolved.iter().enumerate() {
            if let Some(x) = x {
                report.recovered.insert(orig_index[pos], *x);
            }
        }
    }
    for &(idx, rep) in &dup_of {
        if let Some(&x) = report.recovered.get(&rep) {
            report.recovered.insert(idx, x);
        }
    }

    if report.recovered.len() == m {
        let candidate: Vec<u128> = targets.iter().map(|t| report.recovered[&t.index]).collect();
        report.verified = verify_solution(group, targets, &candidate);
        Ok(report)
    } else {
        Err(AttackError::Exhausted {
            partial: Box::new(report),
        })
    }
}

/// Resolves the problem into the prime-power subgroups of the group order
/// (raising generator and targets to `N / q^e`), runs the birthday attack in
/// each subgroup, and recombines each key by CRT.
pub fn pohlig_hellman_birthday(
    group: &CyclicGroup,
    targets: &[TargetKey],
    params: &AttackParams,
) -> Result<AttackReport, AttackError> {
    validate_targets(group, targets)?;
    let m = targets.len();
    let order = group.order();
    let factorization = Factorization::from_parts(group.order_factorization().to_vec())?;
    for (_, _, pe) in factorization.prime_powers() {
        if pe > 1 << 40 {
            return Err(AttackError::SubgroupTooLarge(pe));
        }
    }
    let mut report = AttackReport::empty(m);
    // residues[i] collects (x_i mod q^e, q^e) across subgroups
    let mut residues: Vec<Vec<(u128, u128)>> = vec![Vec::new(); m];
    let mut all_subgroups_ok = true;
    for (pp_idx, (q, e, pe)) in factorization.prime_powers().enumerate() {
        let projection = order / pe;
        let (sub_generator, cost) = group.pow_counted(group.generator(), projection);
        report.group_multiplications += cost;
        let sub_group = CyclicGroup::new(
            group.modulus(),
            pe,
            sub_generator.residue(),
            Some(vec![(q, e)]),
        )?;
        let mut sub_targets = Vec::with_capacity(m);
        for t in targets {
            let (value, cost) = group.pow_counted(t.value, projection);
            report.group_multiplications += cost;
            sub_targets.push(TargetKey {
                index: t.index,
                value,
            });
        }
        let sub_params = AttackParams {
            n_override: None,
            seed: derive_seed(params.seed, 0x7050 + pp_idx as u64),
            ..params.clone()
        };
        let sub_report = match run_attack(&sub_group, &sub_targets, &sub_params) {
            Ok(r) => r,
            Err(AttackError::Exhausted { partial }) => {
                all_subgroups_ok = false;
                *partial
            }
            Err(other) => return Err(other),
        };
        report.rounds_used += sub_report.rounds_used;
        report
            .collisions_per_round
            .extend(sub_report.collisions_per_round);
        report.congruences_used += sub_report.congruences_used;
        report.group_multiplications += sub_report.group_multiplications;
        report.comparisons += sub_report.comparisons;
        for (idx, x) in sub_report.recovered {
            residues[idx - 1].push((x, pe));
        }
    }
    let pp_count = factorization.factors().len();
    for (pos, parts) in residues.iter().enumerate() {
        if parts.len() == pp_count {
            let (x, modulus) = crt_combine(parts).expect("prime powers are coprime");
            debug_assert_eq!(modulus, order);
            report.recovered.insert(pos + 1, x);
        }
    }
    if all_subgroups_ok && report.recovered.len() == m {
        let candidate: Vec<u128> = targets.iter().map(|t| report.recovered[&t.index]).collect();
        report.verified = verify_solution(group, targets, &candidate);
        Ok(report)
    } else {
        Err(AttackError::Exhausted {
            partial: Box::new(report),
        })
    }
}

/// Parses an instance file: one `target <index> <decimal residue>` per line,
/// blank lines ignored. Indices must cover `1..=m` exactly once.
pub fn read_instance(
    group: &CyclicGroup,
    reader: impl BufRead,
) -> Result<Vec<TargetKey>, AttackError> {
    let mut entries: Vec<(usize, u128)> = Vec::new();
    for (line_no, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| AttackError::Instance(format!("read error: {e}")))?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let tag = parts.next();
        let index = parts.next().and_then(|s| s.parse::<usize>().ok());
        let residue = parts.next().and_then(|s| s.parse::<u128>().ok());
        match (tag, index, residue, parts.next()) {
            (Some("target"), Some(index), Some(residue), None) if index >= 1 => {
                entries.push((index, residue));
            }
            _ => {
                return Err(AttackError::Instance(format!(
                    "line {}: expected `target <index> <decimal residue>`",
                    line_no + 1
                )));
            }
        }
    }
    entries.sort_by_key(|&(i, _)| i);
    let mut targets = Vec::with_capacity(entries.len());
    for (pos, (index, residue)) in entries.iter().enumerate() {
        if *index != pos + 1 {
            return Err(AttackError::Instance(format!(
                "target indices must cover 1..={} exactly once",
                entries.len()
            )));
        }
        let value = group
            .element(*residue)
            .map_err(|e| AttackError::Instance(format!("target {index}: {e}")))?;
        if !group.is_member(value) {
            return Err(AttackError::Instance(format!(
                "target {index}: {residue} is not in the generated subgroup"
            )));
        }
        targets.push(TargetKey {
            index: *index,
            value,
        });
    }
    if targets.is_empty() {
        return Err(AttackError::Instance("instance has no targets".into()));
    }
    Ok(targets)
}
