use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::signature::Signature;
use crate::subset::SubsetL;

/// A finite algebra: a carrier `{0, …, n−1}` together with one total
/// operation table per signature symbol.
///
/// A table for a symbol of arity `k` holds `n^k` entries in row-major order:
/// the first argument varies slowest, the last varies fastest. A symbol of
/// arity 0 has a single entry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiniteAlgebra {
    name: String,
    signature: Signature,
    carrier_size: usize,
    tables: Vec<Vec<usize>>,
}

impl FiniteAlgebra {
    pub fn new(
        name: impl Into<String>,
        signature: Signature,
        carrier_size: usize,
        tables: Vec<Vec<usize>>,
    ) -> Result<Self> {
        if carrier_size == 0 {
            return Err(Error::EmptyCarrier);
        }
        if tables.len() != signature.len() {
            return Err(Error::LengthMismatch {
                expected: signature.len(),
                got: tables.len(),
            });
        }
        for (sym, table) in signature.symbols().iter().zip(&tables) {
            let expected = carrier_size.pow(sym.arity as u32);
            if table.len() != expected {
                return Err(Error::LengthMismatch {
                    expected,
                    got: table.len(),
                });
            }
            for &v in table {
                if v >= carrier_size {
                    return Err(Error::ElementOutOfRange {
                        value: v,
                        carrier: carrier_size,
                    });
                }
            }
        }
        Ok(FiniteAlgebra {
            name: name.into(),
            signature,
            carrier_size,
            tables,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn carrier_size(&self) -> usize {
        self.carrier_size
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.carrier_size
    }

    pub fn table(&self, op: usize) -> &[usize] {
        &self.tables[op]
    }

    fn offset(&self, args: &[usize]) -> usize {
        let mut off = 0;
        for &a in args {
            off = off * self.carrier_size + a;
        }
        off
    }

    /// Apply the operation with the given symbol index. Arguments are
    /// assumed in range; this is the hot path used by the algorithms.
    pub fn eval_indexed(&self, op: usize, args: &[usize]) -> usize {
        debug_assert_eq!(args.len(), self.signature.symbols()[op].arity);
        debug_assert!(args.iter().all(|&a| a < self.carrier_size));
        self.tables[op][self.offset(args)]
    }

    /// Apply an operation by name, with full checking of the symbol, the
    /// argument count, and the argument ranges.
    pub fn eval_symbol(&self, symbol: &str, args: &[usize]) -> Result<usize> {
        let op = self.signature.resolve(symbol, args.len())?;
        for &a in args {
            if a >= self.carrier_size {
                return Err(Error::ElementOutOfRange {
                    value: a,
                    carrier: self.carrier_size,
                });
            }
        }
        Ok(self.eval_indexed(op, args))
    }
}

/// All `k`-tuples over `{0, …, n−1}` in row-major order (first coordinate
/// varies slowest). For `k = 0` there is exactly one tuple, the empty one.
pub fn carrier_tuples(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = n.checked_pow(k as u32).expect("tuple space too large");
    (0..total).map(move |mut idx| {
        let mut t = vec![0; k];
        for slot in (0..k).rev() {
            t[slot] = idx % n;
            idx /= n;
        }
        t
    })
}

/// A finite partial map from variable names to carrier elements.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Assignment {
    map: BTreeMap<String, usize>,
}

impl Assignment {
    pub fn new() -> Self {
        Assignment::default()
    }

    pub fn set(&mut self, var: impl Into<String>, value: usize) {
        self.map.insert(var.into(), value);
    }

    pub fn get(&self, var: &str) -> Option<usize> {
        self.map.get(var).copied()
    }

    /// A copy of this assignment with one extra (or overridden) binding.
    pub fn extended(&self, var: impl Into<String>, value: usize) -> Assignment {
        let mut out = self.clone();
        out.set(var, value);
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, usize)> {
        self.map.iter().map(|(k, &v)| (k.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

impl<S: Into<String>> FromIterator<(S, usize)> for Assignment {
    fn from_iter<T: IntoIterator<Item = (S, usize)>>(iter: T) -> Self {
        let mut a = Assignment::new();
        for (k, v) in iter {
            a.set(k, v);
        }
        a
    }
}

/// A parsed algebra file: the algebra plus any named subsets declared with
/// it, in declaration order.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgFile {
    pub algebra: FiniteAlgebra,
    pub subsets: Vec<(String, SubsetL)>,
}

impl AlgFile {
    pub fn subset(&self, name: &str) -> Option<&SubsetL> {
        self.subsets
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, s)| s)
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Parse the line-oriented algebra format:
///
/// ```text
/// algebra <name>
/// carrier <n>
/// op <name> <arity>
/// <n^arity entries, whitespace separated, any line breaks>
/// subset <name> <i1> <i2> …
/// ```
///
/// `#` starts a comment running to the end of the line. Operation tables are
/// row-major with the first argument varying slowest.
pub fn parse_algebra(text: &str) -> Result<AlgFile> {
    // Token stream with line numbers, comments stripped.
    let mut tokens: Vec<(usize, &str)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        for tok in line.split_whitespace() {
            tokens.push((i + 1, tok));
        }
    }
    let mut pos = 0;
    let peek = |pos: usize| tokens.get(pos).copied();
    let last_line = tokens.last().map(|&(l, _)| l).unwrap_or(1);

    let (line, tok) = peek(pos).ok_or_else(|| parse_err(1, "empty file"))?;
    if tok != "algebra" {
        return Err(parse_err(line, format!("expected `algebra`, found `{tok}`")));
    }
    pos += 1;
    let (line, name) = peek(pos).ok_or_else(|| parse_err(line, "missing algebra name"))?;
    let name = name.to_string();
    pos += 1;

    let (cl, tok) = peek(pos).ok_or_else(|| parse_err(line, "missing `carrier` directive"))?;
    if tok != "carrier" {
        return Err(parse_err(cl, format!("expected `carrier`, found `{tok}`")));
    }
    pos += 1;
    let (cl, ctok) = peek(pos).ok_or_else(|| parse_err(cl, "missing carrier size"))?;
    let carrier_size: usize = ctok
        .parse()
        .map_err(|_| parse_err(cl, format!("carrier size `{ctok}` is not a number")))?;
    if carrier_size == 0 {
        return Err(parse_err(cl, "carrier must be nonempty"));
    }
    pos += 1;

    let mut symbols: Vec<(String, usize)> = Vec::new();
    let mut tables: Vec<Vec<usize>> = Vec::new();
    let mut subsets: Vec<(String, SubsetL)> = Vec::new();

    while let Some((line, tok)) = peek(pos) {
        match tok {
            "op" => {
                pos += 1;
                let (l, op_name) =
                    peek(pos).ok_or_else(|| parse_err(line, "missing operation name"))?;
                let op_name = op_name.to_string();
                pos += 1;
                let (l2, atok) =
                    peek(pos).ok_or_else(|| parse_err(l, "missing operation arity"))?;
                let arity: usize = atok
                    .parse()
                    .map_err(|_| parse_err(l2, format!("arity `{atok}` is not a number")))?;
                pos += 1;
                let expected = carrier_size.checked_pow(arity as u32).ok_or_else(|| {
                    parse_err(l2, format!("table for `{op_name}` would be too large"))
                })?;
                let mut table = Vec::with_capacity(expected);
                while table.len() < expected {
                    match peek(pos) {
                        Some((el, etok)) => {
                            if matches!(etok, "op" | "subset") {
                                break;
                            }
                            let v: usize = etok.parse().map_err(|_| {
                                parse_err(el, format!("table entry `{etok}` is not a number"))
                            })?;
                            if v >= carrier_size {
                                return Err(parse_err(
                                    el,
                                    format!(
                                        "table entry {v} out of range for carrier of size {carrier_size}"
                                    ),
                                ));
                            }
                            table.push(v);
                            pos += 1;
                        }
                        None => break,
                    }
                }
                if table.len() != expected {
                    return Err(parse_err(
                        peek(pos).map(|(l, _)| l).unwrap_or(last_line),
                        format!(
                            "table for `{op_name}` expects {expected} entries, found {}",
                            table.len()
                        ),
                    ));
                }
                if symbols.iter().any(|(n, _)| n == &op_name) {
                    return Err(parse_err(l, format!("duplicate symbol `{op_name}`")));
                }
                symbols.push((op_name, arity));
                tables.push(table);
            }
            "subset" => {
                pos += 1;
                let (sl, sname) =
                    peek(pos).ok_or_else(|| parse_err(line, "missing subset name"))?;
                let sname = sname.to_string();
                pos += 1;
                let mut indices = Vec::new();
                while let Some((el, etok)) = peek(pos) {
                    if el != sl {
                        break;
                    }
                    let v: usize = etok.parse().map_err(|_| {
                        parse_err(el, format!("subset entry `{etok}` is not a number"))
                    })?;
                    if v >= carrier_size {
                        return Err(parse_err(
                            el,
                            format!(
                                "subset entry {v} out of range for carrier of size {carrier_size}"
                            ),
                        ));
                    }
                    indices.push(v);
                    pos += 1;
                }
                if subsets.iter().any(|(n, _)| n == &sname) {
                    return Err(parse_err(sl, format!("duplicate subset `{sname}`")));
                }
                let subset = SubsetL::from_indices(carrier_size, &indices)
                    .map_err(|e| parse_err(sl, e.to_string()))?
                    .with_name(sname.clone());
                subsets.push((sname, subset));
            }
            other => {
                return Err(parse_err(
                    line,
                    format!("expected `op` or `subset`, found `{other}`"),
                ));
            }
        }
    }

    let signature = Signature::new(symbols)?;
    let algebra = FiniteAlgebra::new(name, signature, carrier_size, tables)?;
    Ok(AlgFile { algebra, subsets })
}

/// Serialize to the canonical algebra format: directives in declaration
/// order, table entries ten per line, subset indices ascending on one line.
/// Parsing the output reproduces the input exactly, and serializing a parsed
/// canonical file reproduces its bytes.
pub fn serialize_algebra(file: &AlgFile) -> String {
    let a = &file.algebra;
    let mut out = String::new();
    out.push_str(&format!("algebra {}\n", a.name()));
    out.push_str(&format!("carrier {}\n", a.carrier_size()));
    for (i, sym) in a.signature().symbols().iter().enumerate() {
        out.push_str(&format!("op {} {}\n", sym.name, sym.arity));
        for chunk in a.table(i).chunks(10) {
            let words: Vec<String> = chunk.iter().map(|v| v.to_string()).collect();
            out.push_str(&words.join(" "));
            out.push('\n');
        }
    }
    for (name, subset) in &file.subsets {
        let words: Vec<String> = subset.indices().iter().map(|v| v.to_string()).collect();
        out.push_str(&format!("subset {} {}\n", name, words.join(" ")));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z4_text() -> String {
        let mut t = String::from("algebra z4\ncarrier 4\nop add 2\n");
        let mut row = Vec::new();
        for a in 0..4 {
            for b in 0..4 {
                row.push(((a + b) % 4).to_string());
            }
        }
        for chunk in row.chunks(10) {
            t.push_str(&chunk.join(" "));
            t.push('\n');
        }
        t.push_str("subset evens 0 2\n");
        t
    }

    #[test]
    fn parses_z4() {
        let f = parse_algebra(&z4_text()).unwrap();
        assert_eq!(f.algebra.name(), "z4");
        assert_eq!(f.algebra.carrier_size(), 4);
        assert_eq!(f.algebra.eval_symbol("add", &[3, 2]).unwrap(), 1);
        assert_eq!(f.subset("evens").unwrap().indices(), vec![0, 2]);
    }

    #[test]
    fn row_major_order_first_argument_slowest() {
        // Table for f(a,b) = a on carrier 2 is [0,0,1,1].
        let sig = Signature::new([("f", 2)]).unwrap();
        let a = FiniteAlgebra::new("proj", sig, 2, vec![vec![0, 0, 1, 1]]).unwrap();
        assert_eq!(a.eval_symbol("f", &[0, 1]).unwrap(), 0);
        assert_eq!(a.eval_symbol("f", &[1, 0]).unwrap(), 1);
    }

    #[test]
    fn canonical_round_trip_is_byte_identical() {
        let text = z4_text();
        let f = parse_algebra(&text).unwrap();
        assert_eq!(serialize_algebra(&f), text);
        let f2 = parse_algebra(&serialize_algebra(&f)).unwrap();
        assert_eq!(f, f2);
    }

    #[test]
    fn comments_and_loose_whitespace_accepted() {
        let text = "algebra a # my algebra\ncarrier 2\nop c 0  # constant\n1\n";
        let f = parse_algebra(text).unwrap();
        assert_eq!(f.algebra.eval_symbol("c", &[]).unwrap(), 1);
    }

    #[test]
    fn short_table_reports_line() {
        let text = "algebra a\ncarrier 2\nop f 2\n0 1 0\n";
        match parse_algebra(text) {
            Err(Error::Parse { line, message }) => {
                assert_eq!(line, 4);
                assert!(message.contains("expects 4 entries"), "{message}");
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn missing_table_detected_when_next_directive_arrives() {
        let text = "algebra a\ncarrier 2\nop f 2\nop g 1\n0 1\n";
        match parse_algebra(text) {
            Err(Error::Parse { message, .. }) => {
                assert!(message.contains("table for `f`"), "{message}");
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn out_of_range_entry_reports_line() {
        let text = "algebra a\ncarrier 2\nop f 1\n0 2\n";
        match parse_algebra(text) {
            Err(Error::Parse { line, message }) => {
                assert_eq!(line, 4);
                assert!(message.contains("out of range"), "{message}");
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn empty_carrier_rejected_even_without_constants() {
        let text = "algebra a\ncarrier 0\n";
        assert!(parse_algebra(text).is_err());
        assert!(matches!(
            FiniteAlgebra::new("a", Signature::empty(), 0, vec![]),
            Err(Error::EmptyCarrier)
        ));
    }

    #[test]
    fn constant_only_algebra_round_trips() {
        let text = "algebra point\ncarrier 3\nop c 0\n2\n";
        let f = parse_algebra(text).unwrap();
        assert_eq!(serialize_algebra(&f), text);
    }

    #[test]
    fn tuples_enumerate_row_major() {
        let ts: Vec<_> = carrier_tuples(3, 2).collect();
        assert_eq!(ts.len(), 9);
        assert_eq!(ts[0], vec![0, 0]);
        assert_eq!(ts[1], vec![0, 1]);
        assert_eq!(ts[3], vec![1, 0]);
        let empty: Vec<_> = carrier_tuples(5, 0).collect();
        assert_eq!(empty, vec![Vec::<usize>::new()]);
    }

    #[test]
    fn assignment_extension_does_not_mutate() {
        let a: Assignment = [("x", 1usize)].into_iter().collect();
        let b = a.extended("y", 2);
        assert_eq!(a.get("y"), None);
        assert_eq!(b.get("y"), Some(2));
        assert_eq!(b.get("x"), Some(1));
    }
}
