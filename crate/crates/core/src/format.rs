//! Plain-text formats.
//!
//! | header | content |
//! |---|---|
//! | `mgr v k: a1,...,ak` | modular Golomb ruler |
//! | `cyclic v k: d1,...,dk` | circulant incidence matrix |
//! | `bdc t d k` | block-diagonally-circulant matrix |
//! | `v k` + `v` rows of `0`/`1` | dense matrix |
//! | `v v` / `k k` / ... | alist sparse matrix |
//!
//! [`parse`] tells them apart by the first line alone, except that the
//! dense and alist layouts both start with two integers and are told apart
//! by the second line.

use std::fmt::Write as _;

use crate::bdc::BdcSpec;
use crate::matrix::{CirculantSpec, IncidenceMatrix};
use crate::ruler::Ruler;
use crate::{BitRow, Error, Result};

/// Any of the supported documents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Document {
    Ruler(Ruler),
    Circulant(CirculantSpec),
    Bdc(BdcSpec),
    Dense(IncidenceMatrix),
    Alist(IncidenceMatrix),
}

impl Document {
    /// The incidence matrix the document describes.
    pub fn to_matrix(&self) -> Result<IncidenceMatrix> {
        Ok(match self {
            Document::Ruler(r) => IncidenceMatrix::from_circulant(&r.to_circulant()?),
            Document::Circulant(c) => IncidenceMatrix::from_circulant(c),
            Document::Bdc(b) => b.to_matrix(),
            Document::Dense(m) | Document::Alist(m) => m.clone(),
        })
    }
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::ParseError { line, msg: msg.into() }
}

fn int<T: std::str::FromStr>(tok: &str, line: usize) -> Result<T> {
    tok.trim().parse().map_err(|_| perr(line, format!("expected an integer, got `{}`", tok.trim())))
}

fn ints<T: std::str::FromStr>(s: &str, line: usize) -> Result<Vec<T>> {
    s.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()).map(|t| int(t, line)).collect()
}

fn join<T: ToString>(xs: impl IntoIterator<Item = T>, sep: &str) -> String {
    xs.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
}

/// Non-empty lines with their 1-based numbers.
fn content_lines(text: &str) -> Vec<(usize, &str)> {
    text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty()).collect()
}

/// Splits `<tag> v k: list` into `(v, k, list)`.
fn tagged_list(line: &str, tag: &str, no: usize) -> Result<(u64, usize, Vec<u64>)> {
    let rest = line.strip_prefix(tag).ok_or_else(|| perr(no, format!("expected `{tag}`")))?;
    let (head, list) = rest.split_once(':').ok_or_else(|| perr(no, "missing `:`"))?;
    let hv: Vec<u64> = ints(head, no)?;
    let [v, k] = hv[..] else {
        return Err(perr(no, "expected `v k` before `:`"));
    };
    let list: Vec<u64> = ints(list, no)?;
    if list.len() as u64 != k {
        return Err(perr(no, format!("expected {k} entries, found {}", list.len())));
    }
    Ok((v, k as usize, list))
}

pub fn write_ruler(r: &Ruler) -> Result<String> {
    let v = r.modulus().ok_or(Error::ConstraintViolated("ruler has no modulus".into()))?;
    Ok(format!("mgr {v} {}: {}\n", r.order(), join(r.marks(), ",")))
}

pub fn parse_ruler(text: &str) -> Result<Ruler> {
    let (no, line) = *content_lines(text).first().ok_or_else(|| perr(1, "empty input"))?;
    let (v, _, marks) = tagged_list(line, "mgr", no)?;
    let r = Ruler::with_modulus(marks, v)?;
    if !r.is_modular_golomb(v)? {
        return Err(Error::NotModularGolomb { v, k: r.order() });
    }
    Ok(r)
}

pub fn write_circulant(c: &CirculantSpec) -> String {
    format!("cyclic {} {}: {}\n", c.v, c.k(), join(&c.support, ","))
}

pub fn parse_circulant(text: &str) -> Result<CirculantSpec> {
    let (no, line) = *content_lines(text).first().ok_or_else(|| perr(1, "empty input"))?;
    let (v, _, support) = tagged_list(line, "cyclic", no)?;
    if let Some(&s) = support.iter().find(|&&s| s >= v) {
        return Err(Error::MarksExceedModulus { mark: s, v });
    }
    Ok(CirculantSpec::new(v, support))
}

pub fn write_dense(m: &IncidenceMatrix) -> String {
    let k = m.rows().first().map_or(0, |r| r.count_ones());
    let mut out = format!("{} {k}\n", m.v());
    for row in m.rows() {
        out.extend((0..row.len()).map(|j| if row.get(j) { '1' } else { '0' }));
        out.push('\n');
    }
    out
}

pub fn parse_dense(text: &str) -> Result<IncidenceMatrix> {
    let lines = content_lines(text);
    let (no, head) = *lines.first().ok_or_else(|| perr(1, "empty input"))?;
    let hv: Vec<usize> = ints(head, no)?;
    let [v, _k] = hv[..] else {
        return Err(perr(no, "expected `v k`"));
    };
    if lines.len() != v + 1 {
        return Err(perr(no, format!("expected {v} rows, found {}", lines.len() - 1)));
    }
    let rows = lines[1..]
        .iter()
        .map(|&(no, l)| {
            let bits: Vec<bool> = l
                .chars()
                .filter(|c| !c.is_whitespace())
                .map(|c| match c {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    _ => Err(perr(no, format!("unexpected character `{c}`"))),
                })
                .collect::<Result<_>>()?;
            if bits.len() != v {
                return Err(perr(no, format!("expected {v} entries, found {}", bits.len())));
            }
            Ok(bits)
        })
        .collect::<Result<Vec<_>>>()?;
    IncidenceMatrix::from_dense(&rows)
}

pub fn write_bdc(b: &BdcSpec) -> String {
    let t = b.t();
    let mut out = format!("bdc {t} {} {}\n", b.d(), b.k());
    for w in b.weights() {
        let _ = writeln!(out, "{w}");
    }
    for i in 0..t {
        for j in 0..t {
            let s = b.block(i, j);
            if !s.is_empty() {
                let _ = writeln!(out, "{i} {j}: {}", join(s, ","));
            }
        }
    }
    out
}

pub fn parse_bdc(text: &str) -> Result<BdcSpec> {
    let lines = content_lines(text);
    let (no, head) = *lines.first().ok_or_else(|| perr(1, "empty input"))?;
    let rest = head.strip_prefix("bdc").ok_or_else(|| perr(no, "expected `bdc`"))?;
    let hv: Vec<u64> = ints(rest, no)?;
    let [t, d, k] = hv[..] else {
        return Err(perr(no, "expected `bdc t d k`"));
    };
    let t = t as usize;
    if lines.len() < 1 + t {
        return Err(perr(no, "missing weight lines"));
    }
    let weights = lines[1..=t].iter().map(|&(no, l)| int::<usize>(l, no)).collect::<Result<Vec<_>>>()?;
    let mut blocks = vec![Vec::new(); t * t];
    for &(no, l) in &lines[1 + t..] {
        let (ij, list) = l.split_once(':').ok_or_else(|| perr(no, "missing `:`"))?;
        let idx: Vec<usize> = ints(ij, no)?;
        let [i, j] = idx[..] else {
            return Err(perr(no, "expected `i j:`"));
        };
        if i >= t || j >= t {
            return Err(perr(no, "block index out of range"));
        }
        blocks[i * t + j] = ints(list, no)?;
    }
    let b = BdcSpec::new(t, d, blocks)?;
    if b.weights() != weights.as_slice() {
        return Err(perr(no, format!("weights {:?} do not match the blocks {:?}", weights, b.weights())));
    }
    if b.k() as u64 != k {
        return Err(perr(no, format!("header k = {k} but rows have weight {}", b.k())));
    }
    Ok(b)
}

/// alist layout; column `j`'s list holds the rows `i` with `m[i][j] = 1`.
pub fn write_alist(m: &IncidenceMatrix) -> String {
    let v = m.v();
    let t = m.transpose();
    let col_deg: Vec<usize> = t.rows().iter().map(BitRow::count_ones).collect();
    let row_deg: Vec<usize> = m.rows().iter().map(BitRow::count_ones).collect();
    let mut out = String::new();
    let _ = writeln!(out, "{v} {v}");
    let _ = writeln!(out, "{} {}", col_deg.iter().max().unwrap_or(&0), row_deg.iter().max().unwrap_or(&0));
    let _ = writeln!(out, "{}", join(&col_deg, " "));
    let _ = writeln!(out, "{}", join(&row_deg, " "));
    for r in t.rows().iter().chain(m.rows()) {
        let _ = writeln!(out, "{}", join(r.ones().map(|i| i + 1), " "));
    }
    out
}

pub fn parse_alist(text: &str) -> Result<IncidenceMatrix> {
    // blank lines are meaningful for empty lists, so do not filter them
    let lines: Vec<(usize, &str)> = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).collect();
    let get = |i: usize| lines.get(i).copied().ok_or_else(|| perr(i + 1, "unexpected end of input"));
    let (no, l) = get(0)?;
    let dims: Vec<usize> = ints(l, no)?;
    let [n, m] = dims[..] else {
        return Err(perr(no, "expected `n m`"));
    };
    if n != m {
        return Err(Error::NotSquare);
    }
    let (no, l) = get(2)?;
    let col_deg: Vec<usize> = ints(l, no)?;
    let (no, l) = get(3)?;
    let row_deg: Vec<usize> = ints(l, no)?;
    if col_deg.len() != n || row_deg.len() != n {
        return Err(perr(no, "degree list length mismatch"));
    }
    let mut rows = vec![BitRow::new(n); n];
    let mut cols = vec![BitRow::new(n); n];
    for j in 0..n {
        let (no, l) = get(4 + j)?;
        let entries: Vec<usize> = ints(l, no)?;
        if entries.len() != col_deg[j] {
            return Err(perr(no, "column list does not match its degree"));
        }
        for i in entries {
            if i == 0 || i > n {
                return Err(perr(no, format!("index {i} out of range")));
            }
            cols[j].set(i - 1, true);
        }
    }
    for i in 0..n {
        let (no, l) = get(4 + n + i)?;
        let entries: Vec<usize> = ints(l, no)?;
        if entries.len() != row_deg[i] {
            return Err(perr(no, "row list does not match its degree"));
        }
        for j in entries {
            if j == 0 || j > n {
                return Err(perr(no, format!("index {j} out of range")));
            }
            rows[i].set(j - 1, true);
        }
    }
    let m = IncidenceMatrix::from_rows(rows)?;
    if m.transpose().rows() != cols.as_slice() {
        return Err(perr(4, "column and row lists disagree"));
    }
    Ok(m)
}

/// Detects the format from the header and parses.
pub fn parse(text: &str) -> Result<Document> {
    let lines = content_lines(text);
    let (no, head) = *lines.first().ok_or_else(|| perr(1, "empty input"))?;
    let first = head.split_whitespace().next().unwrap_or("");
    match first {
        "mgr" => parse_ruler(text).map(Document::Ruler),
        "cyclic" => parse_circulant(text).map(Document::Circulant),
        "bdc" => parse_bdc(text).map(Document::Bdc),
        _ if ints::<u64>(head, no).is_ok_and(|h| h.len() == 2) => {
            let second_is_pair =
                lines.get(1).is_some_and(|&(no, l)| ints::<u64>(l, no).is_ok_and(|h| h.len() == 2) && l.contains(' '));
            if second_is_pair {
                parse_alist(text).map(Document::Alist)
            } else {
                parse_dense(text).map(Document::Dense)
            }
        }
        _ => Err(perr(no, format!("unrecognized header `{head}`"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{bose_ruler, singer_ruler};

    fn fano() -> IncidenceMatrix {
        IncidenceMatrix::from_circulant(&CirculantSpec::new(7, [0, 1, 3]))
    }

    #[test]
    fn ruler_round_trip() {
        let r = singer_ruler(5).unwrap();
        let text = write_ruler(&r).unwrap();
        assert!(text.starts_with("mgr 31 6: 0,"));
        assert_eq!(parse_ruler(&text).unwrap(), r);
        assert_eq!(parse(&text).unwrap(), Document::Ruler(r));
    }

    #[test]
    fn ruler_rejects_bad_input() {
        assert!(matches!(parse_ruler("mgr 7 3: 0,1,2"), Err(Error::NotModularGolomb { .. })));
        assert!(matches!(parse_ruler("mgr 7 3: 0,1"), Err(Error::ParseError { line: 1, .. })));
        assert!(matches!(parse_ruler("mgr 7 x: 0,1,3"), Err(Error::ParseError { .. })));
    }

    #[test]
    fn circulant_round_trip() {
        let c = CirculantSpec::new(7, [0, 1, 3]);
        assert_eq!(write_circulant(&c), "cyclic 7 3: 0,1,3\n");
        assert_eq!(parse(&write_circulant(&c)).unwrap(), Document::Circulant(c));
    }

    #[test]
    fn dense_round_trip() {
        let m = fano();
        let text = write_dense(&m);
        assert!(text.starts_with("7 3\n1101000\n"));
        assert_eq!(parse(&text).unwrap(), Document::Dense(m));
        assert!(matches!(parse_dense("2 1\n10\n"), Err(Error::ParseError { .. })));
        assert!(matches!(parse_dense("2 1\n1x\n01\n"), Err(Error::ParseError { line: 2, .. })));
    }

    #[test]
    fn alist_round_trip_is_bit_exact() {
        let m = IncidenceMatrix::from_circulant(&bose_ruler(4).unwrap().to_circulant().unwrap());
        let text = write_alist(&m);
        assert!(text.starts_with("15 15\n4 4\n"));
        assert!(!text.contains('\r'));
        let back = parse(&text).unwrap();
        assert_eq!(back, Document::Alist(m.clone()));
        assert_eq!(write_alist(&back.to_matrix().unwrap()), text);
    }

    #[test]
    fn alist_layout() {
        let text = write_alist(&fano());
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 4 + 14);
        assert_eq!(lines[2], "3 3 3 3 3 3 3");
        // row 0 has ones in columns 0, 1, 3
        assert_eq!(lines[4 + 7], "1 2 4");
        // column 0 has ones in rows 0, 4, 6 of the circulant
        assert_eq!(lines[4], "1 5 7");
    }

    #[test]
    fn bdc_round_trip() {
        let b = BdcSpec::split(&bose_ruler(4).unwrap().to_circulant().unwrap(), 5).unwrap();
        let text = write_bdc(&b);
        assert!(text.starts_with("bdc 5 3 4\n"));
        assert_eq!(parse(&text).unwrap(), Document::Bdc(b));
        let broken = text.replacen("\n0\n", "\n1\n", 1);
        assert!(parse_bdc(&broken).is_err());
    }

    #[test]
    fn unknown_header() {
        assert!(matches!(parse("hello"), Err(Error::ParseError { line: 1, .. })));
        assert!(matches!(parse(""), Err(Error::ParseError { .. })));
    }
}
