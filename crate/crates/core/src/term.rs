use std::collections::BTreeSet;
use std::fmt;

use crate::algebra::{Assignment, FiniteAlgebra};
use crate::error::{Error, Result};
use crate::signature::Signature;

/// A term over a signature, with named variables at the leaves.
///
/// Variables and operation symbols share one namespace: when a term is
/// parsed against a signature, a bare identifier is a constant if the
/// signature declares a symbol of arity 0 with that name, and a variable
/// otherwise.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Apply { symbol: String, args: Vec<Term> },
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn apply(symbol: impl Into<String>, args: Vec<Term>) -> Term {
        Term::Apply {
            symbol: symbol.into(),
            args,
        }
    }

    pub fn constant(symbol: impl Into<String>) -> Term {
        Term::apply(symbol, Vec::new())
    }

    /// The set of variable names occurring in the term.
    pub fn variables(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.collect_variables(&mut out);
        out
    }

    fn collect_variables<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            Term::Var(v) => {
                out.insert(v.as_str());
            }
            Term::Apply { args, .. } => {
                for a in args {
                    a.collect_variables(out);
                }
            }
        }
    }

    /// Number of occurrences of `var` among the leaves.
    pub fn count_occurrences(&self, var: &str) -> usize {
        match self {
            Term::Var(v) => usize::from(v == var),
            Term::Apply { args, .. } => args.iter().map(|a| a.count_occurrences(var)).sum(),
        }
    }

    pub fn is_linear_in(&self, var: &str) -> bool {
        self.count_occurrences(var) == 1
    }

    /// Replace every occurrence of the variable `var` by `replacement`.
    pub fn substitute(&self, var: &str, replacement: &Term) -> Term {
        match self {
            Term::Var(v) if v == var => replacement.clone(),
            Term::Var(_) => self.clone(),
            Term::Apply { symbol, args } => Term::Apply {
                symbol: symbol.clone(),
                args: args.iter().map(|a| a.substitute(var, replacement)).collect(),
            },
        }
    }

    /// Depth of the term tree; a bare variable has depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::Apply { args, .. } => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
        }
    }

    /// Check that every symbol used in the term is declared with the right
    /// arity. Variables are unconstrained.
    pub fn check_against(&self, sig: &Signature) -> Result<()> {
        match self {
            Term::Var(_) => Ok(()),
            Term::Apply { symbol, args } => {
                sig.resolve(symbol, args.len())?;
                for a in args {
                    a.check_against(sig)?;
                }
                Ok(())
            }
        }
    }

    /// Parse a term in prefix notation, e.g. `add(x, add(y, zero))`,
    /// resolving bare identifiers against the signature's constants.
    pub fn parse(input: &str, sig: &Signature) -> Result<Term> {
        let tokens = tokenize(input)?;
        let mut pos = 0;
        let term = parse_expr(&tokens, &mut pos, sig)?;
        if pos != tokens.len() {
            return Err(Error::MalformedTerm(format!(
                "unexpected trailing input `{}`",
                tokens[pos..].join("")
            )));
        }
        Ok(term)
    }
}

fn tokenize(input: &str) -> Result<Vec<String>> {
    let mut tokens = Vec::new();
    let mut ident = String::new();
    for c in input.chars() {
        match c {
            '(' | ')' | ',' => {
                if !ident.is_empty() {
                    tokens.push(std::mem::take(&mut ident));
                }
                tokens.push(c.to_string());
            }
            c if c.is_whitespace() => {
                if !ident.is_empty() {
                    tokens.push(std::mem::take(&mut ident));
                }
            }
            c => ident.push(c),
        }
    }
    if !ident.is_empty() {
        tokens.push(ident);
    }
    if tokens.is_empty() {
        return Err(Error::MalformedTerm("empty input".into()));
    }
    Ok(tokens)
}

fn parse_expr(tokens: &[String], pos: &mut usize, sig: &Signature) -> Result<Term> {
    let tok = tokens
        .get(*pos)
        .ok_or_else(|| Error::MalformedTerm("unexpected end of input".into()))?;
    if tok == "(" || tok == ")" || tok == "," {
        return Err(Error::MalformedTerm(format!("unexpected `{tok}`")));
    }
    let head = tok.clone();
    *pos += 1;
    if tokens.get(*pos).map(String::as_str) == Some("(") {
        *pos += 1;
        let mut args = Vec::new();
        if tokens.get(*pos).map(String::as_str) == Some(")") {
            *pos += 1;
        } else {
            loop {
                args.push(parse_expr(tokens, pos, sig)?);
                match tokens.get(*pos).map(String::as_str) {
                    Some(",") => *pos += 1,
                    Some(")") => {
                        *pos += 1;
                        break;
                    }
                    _ => {
                        return Err(Error::MalformedTerm(format!(
                            "expected `,` or `)` in arguments of `{head}`"
                        )))
                    }
                }
            }
        }
        sig.resolve(&head, args.len())?;
        Ok(Term::Apply { symbol: head, args })
    } else if sig.arity_of(&head) == Some(0) {
        Ok(Term::constant(head))
    } else if sig.index_of(&head).is_some() {
        Err(Error::MalformedTerm(format!(
            "symbol `{head}` used without arguments"
        )))
    } else {
        Ok(Term::Var(head))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::Apply { symbol, args } => {
                if args.is_empty() {
                    write!(f, "{symbol}()")
                } else {
                    write!(f, "{symbol}(")?;
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            write!(f, ",")?;
                        }
                        write!(f, "{a}")?;
                    }
                    write!(f, ")")
                }
            }
        }
    }
}

/// Evaluate a term in an algebra under an assignment. Every variable of the
/// term must be assigned, every assigned value used must be in range, and
/// every symbol must be declared with matching arity.
pub fn eval_term(algebra: &FiniteAlgebra, term: &Term, assignment: &Assignment) -> Result<usize> {
    match term {
        Term::Var(v) => {
            let value = assignment
                .get(v)
                .ok_or_else(|| Error::UnassignedVariable(v.clone()))?;
            if value >= algebra.carrier_size() {
                return Err(Error::ElementOutOfRange {
                    value,
                    carrier: algebra.carrier_size(),
                });
            }
            Ok(value)
        }
        Term::Apply { symbol, args } => {
            let op = algebra.signature().resolve(symbol, args.len())?;
            let mut vals = Vec::with_capacity(args.len());
            for a in args {
                vals.push(eval_term(algebra, a, assignment)?);
            }
            Ok(algebra.eval_indexed(op, &vals))
        }
    }
}

/// The linearization of a term around one variable.
///
/// For a term `t` with `r ≥ 1` occurrences of the variable, `terms[i]`
/// (0-based) is `t` with occurrence `i+1` — counting leaves left to right —
/// replaced by the fresh variable `x`, all earlier occurrences replaced by
/// `y`, and all later ones by `z`. Each `terms[i]` is linear in `x`.
///
/// Writing `sᵢ(b)` for `terms[i−1]` evaluated at `y ↦ a, z ↦ a′, x ↦ b`
/// (other variables fixed), the family satisfies, for all `a, a′`:
///
/// * `s₁(a′) = t[x₁↦a′]` — with the distinguished slot at the front, `y` is
///   vacuous and setting `x = z = a′` recovers `t`;
/// * `sᵣ(a) = t[x₁↦a]` — symmetrically, `z` is vacuous at the end;
/// * `sᵢ(a) = sᵢ₊₁(a′)` — both sides are `t` with the first `i` occurrences
///   set to `a` and the rest to `a′`.
///
/// Chaining these turns any question about `t[x₁↦a]` vs `t[x₁↦a′]` into `r`
/// questions about self-maps `b ↦ sᵢ(b)`, each linear in `x`.
///
/// The fresh names avoid every variable already present by appending
/// `__1`, `__2`, … to the bases `x`, `y`, `z` as needed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Linearization {
    pub terms: Vec<Term>,
    pub x: String,
    pub y: String,
    pub z: String,
}

fn fresh_name(base: &str, used: &BTreeSet<&str>) -> String {
    if !used.contains(base) {
        return base.to_string();
    }
    let mut k = 1;
    loop {
        let candidate = format!("{base}__{k}");
        if !used.contains(candidate.as_str()) {
            return candidate;
        }
        k += 1;
    }
}

/// Split a term with `r` occurrences of `var` into `r` terms, each linear in
/// a fresh variable `x`, with earlier occurrences renamed `y` and later ones
/// `z`. Errors if `var` does not occur.
pub fn linearize(term: &Term, var: &str) -> Result<Linearization> {
    let r = term.count_occurrences(var);
    if r == 0 {
        return Err(Error::VariableAbsent(var.to_string()));
    }
    let mut used = term.variables();
    used.remove(var);
    let x = fresh_name("x", &used);
    let y = fresh_name("y", &used);
    let z = fresh_name("z", &used);

    fn relabel(
        term: &Term,
        var: &str,
        target: usize,
        counter: &mut usize,
        x: &str,
        y: &str,
        z: &str,
    ) -> Term {
        match term {
            Term::Var(v) if v == var => {
                *counter += 1;
                let name = if *counter < target {
                    y
                } else if *counter == target {
                    x
                } else {
                    z
                };
                Term::var(name)
            }
            Term::Var(_) => term.clone(),
            Term::Apply { symbol, args } => Term::Apply {
                symbol: symbol.clone(),
                args: args
                    .iter()
                    .map(|a| relabel(a, var, target, counter, x, y, z))
                    .collect(),
            },
        }
    }

    let terms = (1..=r)
        .map(|i| {
            let mut counter = 0;
            relabel(term, var, i, &mut counter, &x, &y, &z)
        })
        .collect();
    Ok(Linearization { terms, x, y, z })
}
