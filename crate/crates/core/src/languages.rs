use std::collections::VecDeque;

use serde::Serialize;

use crate::algebra::FiniteAlgebra;
use crate::error::{Error, InternalError, Result};
use crate::partition::{coarsest_stable_refinement, Partition};
use crate::signature::Signature;
use crate::subset::SubsetL;
use crate::syntactic::syntactic_congruence;
use crate::translations::{self_map_cap, Provenance, Transformation, TransformationMonoid};

/// A deterministic finite automaton with a total transition function.
/// Letters are named tokens; `transitions[state][letter]` is the next
/// state.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Dfa {
    name: String,
    alphabet: Vec<String>,
    states: usize,
    initial: usize,
    accepting: SubsetL,
    transitions: Vec<Vec<usize>>,
}

impl Dfa {
    pub fn new(
        name: impl Into<String>,
        alphabet: Vec<String>,
        states: usize,
        initial: usize,
        accepting: SubsetL,
        transitions: Vec<Vec<usize>>,
    ) -> Result<Self> {
        if alphabet.is_empty() {
            return Err(Error::EmptyAlphabet);
        }
        for (i, a) in alphabet.iter().enumerate() {
            if alphabet[..i].contains(a) {
                return Err(Error::DuplicateSymbol(a.clone()));
            }
        }
        if states == 0 {
            return Err(Error::EmptyCarrier);
        }
        if initial >= states {
            return Err(Error::ElementOutOfRange {
                value: initial,
                carrier: states,
            });
        }
        if accepting.carrier_size() != states {
            return Err(Error::LengthMismatch {
                expected: states,
                got: accepting.carrier_size(),
            });
        }
        if transitions.len() != states {
            return Err(Error::LengthMismatch {
                expected: states,
                got: transitions.len(),
            });
        }
        for row in &transitions {
            if row.len() != alphabet.len() {
                return Err(Error::LengthMismatch {
                    expected: alphabet.len(),
                    got: row.len(),
                });
            }
            for &next in row {
                if next >= states {
                    return Err(Error::ElementOutOfRange {
                        value: next,
                        carrier: states,
                    });
                }
            }
        }
        Ok(Dfa {
            name: name.into(),
            alphabet,
            states,
            initial,
            accepting,
            transitions,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.states
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn accepting(&self) -> &SubsetL {
        &self.accepting
    }

    pub fn transitions(&self) -> &[Vec<usize>] {
        &self.transitions
    }

    pub fn letter_index(&self, letter: &str) -> Result<usize> {
        self.alphabet
            .iter()
            .position(|a| a == letter)
            .ok_or_else(|| Error::UnknownSymbol(letter.to_string()))
    }

    pub fn step(&self, state: usize, letter: usize) -> usize {
        self.transitions[state][letter]
    }

    /// Run the automaton on a word of letter indices.
    pub fn accepts(&self, word: &[usize]) -> bool {
        let mut s = self.initial;
        for &l in word {
            s = self.transitions[s][l];
        }
        self.accepting.contains(s)
    }

    /// Run the automaton on a word of letter tokens.
    pub fn accepts_tokens(&self, word: &[&str]) -> Result<bool> {
        let mut indices = Vec::with_capacity(word.len());
        for t in word {
            indices.push(self.letter_index(t)?);
        }
        Ok(self.accepts(&indices))
    }

    /// States reachable from the initial state, in breadth-first discovery
    /// order (letters tried in alphabet order).
    fn reachable(&self) -> Vec<usize> {
        let mut seen = vec![false; self.states];
        let mut order = Vec::new();
        let mut queue = VecDeque::new();
        seen[self.initial] = true;
        queue.push_back(self.initial);
        while let Some(s) = queue.pop_front() {
            order.push(s);
            for l in 0..self.alphabet.len() {
                let n = self.transitions[s][l];
                if !seen[n] {
                    seen[n] = true;
                    queue.push_back(n);
                }
            }
        }
        order
    }
}

/// The minimal automaton for the same language: unreachable states are
/// dropped, then states are merged by the coarsest partition that refines
/// accepting/non-accepting and is stable under every letter. The result is
/// renumbered canonically by breadth-first discovery from the initial
/// state, so equivalent inputs produce byte-identical serializations.
pub fn minimal_dfa(d: &Dfa) -> Result<Dfa> {
    let order = d.reachable();
    let mut renumber = vec![usize::MAX; d.states];
    for (new, &old) in order.iter().enumerate() {
        renumber[old] = new;
    }
    let accepting_bits: Vec<bool> = order.iter().map(|&s| d.accepting.contains(s)).collect();
    let maps: Vec<Vec<usize>> = (0..d.alphabet.len())
        .map(|l| order.iter().map(|&s| renumber[d.transitions[s][l]]).collect())
        .collect();
    let start = Partition::from_subset(&SubsetL::from_bits(accepting_bits));
    let classes = coarsest_stable_refinement(&start, &maps);

    // Canonical numbering of the merged states: breadth-first from the
    // class of the initial state.
    let mut class_order = vec![usize::MAX; classes.class_count()];
    let mut next = 0;
    let mut queue = VecDeque::new();
    let start_class = classes.class_of(renumber[d.initial]);
    class_order[start_class] = next;
    next += 1;
    queue.push_back(start_class);
    let reps: Vec<usize> = classes.classes().iter().map(|c| c[0]).collect();
    while let Some(c) = queue.pop_front() {
        for map in &maps {
            let target = classes.class_of(map[reps[c]]);
            if class_order[target] == usize::MAX {
                class_order[target] = next;
                next += 1;
                queue.push_back(target);
            }
        }
    }
    debug_assert_eq!(next, classes.class_count(), "all classes reachable");

    let m = classes.class_count();
    let mut transitions = vec![vec![0usize; d.alphabet.len()]; m];
    let mut accepting = vec![false; m];
    for c in 0..m {
        let new_id = class_order[c];
        accepting[new_id] = d.accepting.contains(order[reps[c]]);
        for (l, map) in maps.iter().enumerate() {
            transitions[new_id][l] = class_order[classes.class_of(map[reps[c]])];
        }
    }
    Dfa::new(
        format!("{}_min", d.name),
        d.alphabet.clone(),
        m,
        class_order[start_class],
        SubsetL::from_bits(accepting),
        transitions,
    )
}

/// The monoid of state maps induced by words: letter actions closed under
/// composition, with the identity. `letter_elements[l]` is the monoid
/// index of letter `l`'s action.
#[derive(Debug, Clone)]
pub struct TransitionMonoid {
    pub monoid: TransformationMonoid,
    pub letter_elements: Vec<usize>,
}

pub fn transition_monoid(d: &Dfa) -> Result<TransitionMonoid> {
    let generators: Vec<Transformation> = d
        .alphabet
        .iter()
        .enumerate()
        .map(|(l, letter)| {
            Transformation::new(
                (0..d.states).map(|s| d.transitions[s][l]).collect(),
                Provenance::Elementary {
                    symbol: letter.clone(),
                    coordinate: 0,
                    fixed: Vec::new(),
                },
            )
        })
        .collect();
    let monoid = TransformationMonoid::generate(d.states, generators, self_map_cap(d.states))?;
    let letter_elements = (0..d.alphabet.len())
        .map(|l| {
            let image: Vec<usize> = (0..d.states).map(|s| d.transitions[s][l]).collect();
            monoid
                .index_of(&image)
                .expect("letter actions are generators of their own closure")
        })
        .collect();
    Ok(TransitionMonoid {
        monoid,
        letter_elements,
    })
}

/// The syntactic monoid of a regular language, presented as a finite
/// algebra: the transition monoid of the minimal automaton, with signature
/// `mul` (composition in word order: `mul(u,v)` is "read `u`, then `v`")
/// and the constant `e` for the identity. `accepted` is the set of monoid
/// elements sending the initial state into the accepting set; a word lies
/// in the language iff its monoid element is accepted.
///
/// Construction verifies faithfulness: the syntactic congruence of the
/// accepted set on this algebra must be equality. Anything coarser would
/// mean minimization or closure produced a monoid that conflates
/// distinguishable words, so the failure is reported as internal.
#[derive(Debug, Clone)]
pub struct SyntacticMonoid {
    pub minimal: Dfa,
    pub transitions: TransitionMonoid,
    pub algebra: FiniteAlgebra,
    pub accepted: SubsetL,
    pub identity: usize,
}

impl SyntacticMonoid {
    pub fn size(&self) -> usize {
        self.algebra.carrier_size()
    }

    /// The monoid element of a word of letter indices.
    pub fn element_of_letters(&self, word: &[usize]) -> usize {
        let mut e = self.identity;
        for &l in word {
            e = self
                .transitions
                .monoid
                .compose(e, self.transitions.letter_elements[l])
                .expect("monoid is closed");
        }
        e
    }

    /// The monoid element of a word of letter tokens.
    pub fn element_of_tokens(&self, word: &[&str]) -> Result<usize> {
        let mut letters = Vec::with_capacity(word.len());
        for t in word {
            letters.push(self.minimal.letter_index(t)?);
        }
        Ok(self.element_of_letters(&letters))
    }

    /// Language membership through the monoid.
    pub fn member(&self, word: &[usize]) -> bool {
        self.accepted.contains(self.element_of_letters(word))
    }
}

pub fn syntactic_monoid(d: &Dfa) -> Result<SyntacticMonoid> {
    let minimal = minimal_dfa(d)?;
    let transitions = transition_monoid(&minimal)?;
    let n = transitions.monoid.elements().len();
    let mut mul = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            mul.push(
                transitions
                    .monoid
                    .compose(i, j)
                    .expect("monoid is closed under composition"),
            );
        }
    }
    let identity = transitions.monoid.identity_index();
    let sig = Signature::new([("mul", 2), ("e", 0)])?;
    let algebra = FiniteAlgebra::new(
        format!("{}_synmon", d.name),
        sig,
        n,
        vec![mul, vec![identity]],
    )?;
    let accepted = SubsetL::from_bits(
        transitions
            .monoid
            .elements()
            .iter()
            .map(|f| minimal.accepting.contains(f.apply(minimal.initial)))
            .collect(),
    );
    let analysis = syntactic_congruence(&algebra, &accepted)?;
    if analysis.congruence.class_count() != n {
        return Err(InternalError::MonoidNotFaithful(analysis.congruence.class_count()).into());
    }
    Ok(SyntacticMonoid {
        minimal,
        transitions,
        algebra,
        accepted,
        identity,
    })
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Parse the line-oriented automaton format:
///
/// ```text
/// dfa <name>
/// alphabet a b …
/// states <n>
/// initial <i>
/// accepting i j …
/// <n rows, one per state, one next-state per letter>
/// ```
///
/// The `accepting` line may list no states. `#` starts a comment.
pub fn parse_dfa(text: &str) -> Result<Dfa> {
    let mut rows: Vec<(usize, Vec<String>)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let toks: Vec<String> = raw
            .split('#')
            .next()
            .unwrap_or("")
            .split_whitespace()
            .map(|s| s.to_string())
            .collect();
        if !toks.is_empty() {
            rows.push((i + 1, toks));
        }
    }
    let last_line = text.lines().count().max(1);
    let mut it = rows.into_iter();
    let mut expect = |what: &str| {
        it.next()
            .ok_or_else(|| parse_err(last_line, format!("missing `{what}` line")))
    };

    let (ln, toks) = expect("dfa")?;
    if toks[0] != "dfa" || toks.len() != 2 {
        return Err(parse_err(ln, "expected `dfa <name>`"));
    }
    let name = toks[1].clone();

    let (ln, toks) = expect("alphabet")?;
    if toks[0] != "alphabet" {
        return Err(parse_err(ln, "expected `alphabet <letters…>`"));
    }
    let alphabet: Vec<String> = toks[1..].to_vec();
    if alphabet.is_empty() {
        return Err(parse_err(ln, "alphabet must list at least one letter"));
    }

    let (ln, toks) = expect("states")?;
    if toks[0] != "states" || toks.len() != 2 {
        return Err(parse_err(ln, "expected `states <n>`"));
    }
    let states: usize = toks[1]
        .parse()
        .map_err(|_| parse_err(ln, format!("state count `{}` is not a number", toks[1])))?;

    let (ln, toks) = expect("initial")?;
    if toks[0] != "initial" || toks.len() != 2 {
        return Err(parse_err(ln, "expected `initial <i>`"));
    }
    let initial: usize = toks[1]
        .parse()
        .map_err(|_| parse_err(ln, format!("initial state `{}` is not a number", toks[1])))?;

    let (ln, toks) = expect("accepting")?;
    if toks[0] != "accepting" {
        return Err(parse_err(ln, "expected `accepting <states…>`"));
    }
    let mut accepting_bits = vec![false; states];
    for t in &toks[1..] {
        let v: usize = t
            .parse()
            .map_err(|_| parse_err(ln, format!("accepting state `{t}` is not a number")))?;
        if v >= states {
            return Err(parse_err(
                ln,
                format!("accepting state {v} out of range for {states} states"),
            ));
        }
        accepting_bits[v] = true;
    }

    let mut transitions = Vec::with_capacity(states);
    for s in 0..states {
        let (ln, toks) = it
            .next()
            .ok_or_else(|| parse_err(last_line, format!("missing transition row for state {s}")))?;
        if toks.len() != alphabet.len() {
            return Err(parse_err(
                ln,
                format!(
                    "row for state {s} expects {} entries, found {}",
                    alphabet.len(),
                    toks.len()
                ),
            ));
        }
        let mut row = Vec::with_capacity(alphabet.len());
        for t in &toks {
            let v: usize = t
                .parse()
                .map_err(|_| parse_err(ln, format!("next state `{t}` is not a number")))?;
            if v >= states {
                return Err(parse_err(
                    ln,
                    format!("next state {v} out of range for {states} states"),
                ));
            }
            row.push(v);
        }
        transitions.push(row);
    }
    if let Some((ln, toks)) = it.next() {
        return Err(parse_err(
            ln,
            format!("unexpected trailing content `{}`", toks[0]),
        ));
    }
    Dfa::new(
        name,
        alphabet,
        states,
        initial,
        SubsetL::from_bits(accepting_bits),
        transitions,
    )
}

/// Serialize to the canonical automaton format: header lines in fixed
/// order, accepting states ascending, then one transition row per state.
pub fn serialize_dfa(d: &Dfa) -> String {
    let mut out = String::new();
    out.push_str(&format!("dfa {}\n", d.name));
    out.push_str(&format!("alphabet {}\n", d.alphabet.join(" ")));
    out.push_str(&format!("states {}\n", d.states));
    out.push_str(&format!("initial {}\n", d.initial));
    let acc: Vec<String> = d.accepting.indices().iter().map(|v| v.to_string()).collect();
    if acc.is_empty() {
        out.push_str("accepting\n");
    } else {
        out.push_str(&format!("accepting {}\n", acc.join(" ")));
    }
    for row in &d.transitions {
        let words: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        out.push_str(&words.join(" "));
        out.push('\n');
    }
    out
}
