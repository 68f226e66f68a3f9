//! Text presentations of cdgas and cell modules.
//!
//! ```text
//! cdga E3 free
//! gen x deg 1 wt 1
//! gen y deg 1 wt 1
//! gen z deg 1 wt 2
//! d z = x*y
//! ```
//!
//! Module files use `cell <name> over <cdga>`, `elt <ident> deg <int> wt <int>`
//! and `d <elt> = <poly>` where every term contains exactly one cell element
//! factor and the remaining factors are algebra generators. Lines starting
//! with `#` and trailing `# ...` comments are ignored.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::cdga::{BiDegree, Cdga, Element, GeneratorSpec, Kind, Monomial};
use crate::error::{Error, Result};
use crate::linalg::Scalar;

/// A parsed algebra file: the presentation plus optional augmentation values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CdgaFile {
    pub cdga: Cdga,
    pub augmentation: BTreeMap<usize, Element>,
}

/// A parsed module file, still independent of any module data structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleFile {
    pub name: String,
    pub over: String,
    pub cells: Vec<(String, BiDegree)>,
    /// `d(cells[j]) = Σ coefficient · cells[i]`, listed per source cell.
    pub differential: BTreeMap<usize, Vec<(usize, Element)>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Sym(char),
}

/// A coefficient and its factors `(name, column, exponent)`.
type RawTerm = (Scalar, Vec<(String, usize, u32)>);

struct Line<'a> {
    number: usize,
    toks: Vec<(Tok, usize)>,
    pos: usize,
    _src: &'a str,
}

fn err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, column, message: message.into() }
}

fn lex(number: usize, src: &str) -> Result<Line<'_>> {
    let code = match src.find('#') {
        Some(i) => &src[..i],
        None => src,
    };
    let chars: Vec<char> = code.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                i += 1;
            }
            toks.push((Tok::Ident(chars[start..i].iter().collect()), col));
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            toks.push((Tok::Int(digits.parse().expect("digits")), col));
        } else if "+-*/=^".contains(c) {
            toks.push((Tok::Sym(c), col));
            i += 1;
        } else {
            return Err(err(number, col, format!("unexpected character `{c}`")));
        }
    }
    Ok(Line { number, toks, pos: 0, _src: src })
}

impl Line<'_> {
    fn column(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.1).unwrap_or_else(|| self.toks.last().map(|t| t.1 + 1).unwrap_or(1))
    }

    fn error(&self, message: impl Into<String>) -> Error {
        err(self.number, self.column(), message)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn done(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn ident(&mut self, what: &str) -> Result<String> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.error(format!("expected {what}"))),
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<()> {
        match self.peek() {
            Some(Tok::Ident(s)) if s == kw => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.error(format!("expected `{kw}`"))),
        }
    }

    fn sym(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected `{c}`")))
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn int(&mut self) -> Result<i64> {
        let neg = self.eat('-');
        match self.peek() {
            Some(Tok::Int(n)) => {
                let n: i64 = n.try_into().map_err(|_| self.error("integer out of range"))?;
                self.pos += 1;
                Ok(if neg { -n } else { n })
            }
            _ => Err(self.error("expected an integer")),
        }
    }

    fn end(&self) -> Result<()> {
        if self.done() {
            Ok(())
        } else {
            Err(self.error("unexpected trailing input"))
        }
    }

    fn rational(&mut self) -> Result<Option<Scalar>> {
        let Some(Tok::Int(n)) = self.peek() else {
            return Ok(None);
        };
        let n = n.clone();
        self.pos += 1;
        if self.eat('/') {
            match self.peek() {
                Some(Tok::Int(d)) if !d.is_zero() => {
                    let d = d.clone();
                    self.pos += 1;
                    Ok(Some(Scalar::new(n, d)))
                }
                _ => Err(self.error("expected a positive denominator")),
            }
        } else {
            Ok(Some(Scalar::from_integer(n)))
        }
    }

    /// `poly := [sign] term (sign term)*`, each term a coefficient times a
    /// product of identifiers (`ident^k` allowed). Returns the raw terms.
    fn poly(&mut self) -> Result<Vec<RawTerm>> {
        let mut terms = Vec::new();
        let mut negative = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        loop {
            let mut coef = Scalar::one();
            let mut factors = Vec::new();
            let mut need_factor = false;
            if let Some(c) = self.rational()? {
                coef = c;
                if self.eat('*') {
                    need_factor = true;
                }
            } else {
                need_factor = true;
            }
            if need_factor {
                loop {
                    let col = self.column();
                    let name = self.ident("an identifier")?;
                    let mut exp = 1u32;
                    if self.eat('^') {
                        let e = self.int()?;
                        if e < 1 {
                            return Err(self.error("exponent must be positive"));
                        }
                        exp = e as u32;
                    }
                    factors.push((name, col, exp));
                    if !self.eat('*') {
                        break;
                    }
                }
            }
            if negative {
                coef = -coef;
            }
            terms.push((coef, factors));
            if self.eat('+') {
                negative = false;
            } else if self.eat('-') {
                negative = true;
            } else {
                break;
            }
        }
        self.end()?;
        Ok(terms)
    }
}

fn lines(text: &str) -> Result<Vec<Line<'_>>> {
    let mut out = Vec::new();
    for (i, src) in text.lines().enumerate() {
        let l = lex(i + 1, src)?;
        if !l.toks.is_empty() {
            out.push(l);
        }
    }
    if out.is_empty() {
        return Err(err(1, 1, "empty presentation"));
    }
    Ok(out)
}

fn build_element(
    cdga: &Cdga,
    line: &Line<'_>,
    terms: Vec<RawTerm>,
) -> Result<Element> {
    let mut raw = Element::zero();
    for (coef, factors) in terms {
        let mut word = Vec::new();
        for (name, col, exp) in factors {
            let g = cdga
                .find(&name)
                .ok_or_else(|| err(line.number, col, format!("undeclared generator `{name}`")))?;
            word.extend(std::iter::repeat_n(g, exp as usize));
        }
        let factors: Vec<Element> = word.into_iter().map(Element::generator).collect();
        raw.add_scaled(&cdga.multiply_all(&factors), &coef);
    }
    Ok(raw)
}

fn expect_bidegree(cdga: &Cdga, line: &Line<'_>, value: &Element, want: BiDegree, what: &str) -> Result<()> {
    for m in value.terms().keys() {
        let got = cdga.monomial_bidegree(m);
        if got != want {
            return Err(err(
                line.number,
                1,
                format!("{what}: term {} has bidegree {got}, expected {want}", cdga.fmt_monomial(m)),
            ));
        }
    }
    Ok(())
}

/// Parses one algebra presentation.
pub fn parse_cdga(text: &str) -> Result<CdgaFile> {
    let mut lines = lines(text)?;
    let header = &mut lines[0];
    header.keyword("cdga")?;
    let name = header.ident("an algebra name")?;
    let kind = match header.ident("`free` or `table`")?.as_str() {
        "free" => Kind::Free,
        "table" => Kind::Table,
        other => return Err(err(header.number, header.column().saturating_sub(1).max(1), format!("unknown kind `{other}`"))),
    };
    header.end()?;
    let mut cdga = Cdga::new(name.clone(), kind, Vec::new())?;
    let mut gens: Vec<GeneratorSpec> = Vec::new();
    let mut differentials: Vec<(usize, Element)> = Vec::new();
    let mut products: Vec<(usize, usize, Element)> = Vec::new();
    let mut augmentation = BTreeMap::new();
    for line in lines.iter_mut().skip(1) {
        let head_col = line.column();
        let head = line.ident("a keyword")?;
        match head.as_str() {
            "gen" => {
                let col = line.column();
                let g = line.ident("a generator name")?;
                line.keyword("deg")?;
                let deg = line.int()?;
                line.keyword("wt")?;
                let wt_col = line.column();
                let wt = line.int()?;
                line.end()?;
                if wt < 1 {
                    return Err(err(line.number, wt_col, format!("weight of `{g}` must be at least 1")));
                }
                if gens.iter().any(|s| s.name == g) {
                    return Err(err(line.number, col, format!("duplicate generator `{g}`")));
                }
                gens.push(GeneratorSpec::new(g, deg, wt));
                cdga = Cdga::new(name.clone(), kind, gens.clone())?;
                for (g, d) in &differentials {
                    cdga.set_differential(*g, d.clone());
                }
                for (g, h, v) in &products {
                    cdga.set_product(*g, *h, v.clone())?;
                }
            }
            "d" | "aug" => {
                let col = line.column();
                let g_name = line.ident("a generator name")?;
                let g = cdga
                    .find(&g_name)
                    .ok_or_else(|| err(line.number, col, format!("undeclared generator `{g_name}`")))?;
                line.sym('=')?;
                let terms = line.poly()?;
                let value = build_element(&cdga, line, terms)?;
                let deg = cdga.generator_bidegree(g);
                if head == "d" {
                    expect_bidegree(&cdga, line, &value, deg + BiDegree::new(1, 0), &format!("d{g_name}"))?;
                    cdga.set_differential(g, value.clone());
                    differentials.push((g, value));
                } else {
                    expect_bidegree(&cdga, line, &value, deg, &format!("aug {g_name}"))?;
                    augmentation.insert(g, value);
                }
            }
            "mul" => {
                if kind != Kind::Table {
                    return Err(err(line.number, head_col, "`mul` lines need a table algebra"));
                }
                let mut ids = Vec::new();
                for _ in 0..2 {
                    let col = line.column();
                    let n = line.ident("a generator name")?;
                    ids.push(cdga.find(&n).ok_or_else(|| err(line.number, col, format!("undeclared generator `{n}`")))?);
                }
                line.sym('=')?;
                let terms = line.poly()?;
                let value = build_element(&cdga, line, terms)?;
                let want = cdga.generator_bidegree(ids[0]) + cdga.generator_bidegree(ids[1]);
                expect_bidegree(&cdga, line, &value, want, "mul")?;
                cdga.set_product(ids[0], ids[1], value.clone())?;
                products.push((ids[0], ids[1], value));
            }
            other => return Err(err(line.number, head_col, format!("unknown keyword `{other}`"))),
        }
    }
    Ok(CdgaFile { cdga, augmentation })
}

/// Parses a module presentation over `cdga`.
pub fn parse_module(text: &str, cdga: &Cdga) -> Result<ModuleFile> {
    let mut lines = lines(text)?;
    let header = &mut lines[0];
    header.keyword("cell")?;
    let name = header.ident("a module name")?;
    header.keyword("over")?;
    let col = header.column();
    let over = header.ident("an algebra name")?;
    header.end()?;
    if over != cdga.name() {
        return Err(err(header.number, col, format!("module is over `{over}` but the algebra is `{}`", cdga.name())));
    }
    let mut cells: Vec<(String, BiDegree)> = Vec::new();
    let mut differential: BTreeMap<usize, Vec<(usize, Element)>> = BTreeMap::new();
    for line in lines.iter_mut().skip(1) {
        let head_col = line.column();
        let head = line.ident("a keyword")?;
        match head.as_str() {
            "elt" => {
                let col = line.column();
                let e = line.ident("an element name")?;
                line.keyword("deg")?;
                let deg = line.int()?;
                line.keyword("wt")?;
                let wt = line.int()?;
                line.end()?;
                if cells.iter().any(|c| c.0 == e) || cdga.find(&e).is_some() {
                    return Err(err(line.number, col, format!("name `{e}` is already in use")));
                }
                cells.push((e, BiDegree::new(deg, wt)));
            }
            "d" => {
                let col = line.column();
                let e = line.ident("an element name")?;
                let src = cells
                    .iter()
                    .position(|c| c.0 == e)
                    .ok_or_else(|| err(line.number, col, format!("undeclared element `{e}`")))?;
                line.sym('=')?;
                let terms = line.poly()?;
                let mut by_cell: BTreeMap<usize, Element> = BTreeMap::new();
                for (coef, factors) in terms {
                    let mut cell = None;
                    let mut word = Vec::new();
                    for (n, c, exp) in factors {
                        if let Some(i) = cells.iter().position(|x| x.0 == n) {
                            if cell.is_some() || exp != 1 {
                                return Err(err(line.number, c, "each term needs exactly one cell element"));
                            }
                            cell = Some(i);
                        } else if let Some(g) = cdga.find(&n) {
                            word.extend(std::iter::repeat_n(g, exp as usize));
                        } else {
                            return Err(err(line.number, c, format!("undeclared identifier `{n}`")));
                        }
                    }
                    let Some(cell) = cell else {
                        return Err(err(line.number, 1, "each term needs exactly one cell element"));
                    };
                    let factors: Vec<Element> = word.into_iter().map(Element::generator).collect();
                    by_cell.entry(cell).or_default().add_scaled(&cdga.multiply_all(&factors), &coef);
                }
                let want = cells[src].1 + BiDegree::new(1, 0);
                for (&cell, coef) in &by_cell {
                    let need = want - cells[cell].1;
                    for m in coef.terms().keys() {
                        let got = cdga.monomial_bidegree(m);
                        if got != need {
                            return Err(err(
                                line.number,
                                1,
                                format!("coefficient {} of {} has bidegree {got}, expected {need}", cdga.fmt_monomial(m), cells[cell].0),
                            ));
                        }
                    }
                }
                differential.insert(src, by_cell.into_iter().filter(|(_, c)| !c.is_zero()).collect());
            }
            other => return Err(err(line.number, head_col, format!("unknown keyword `{other}`"))),
        }
    }
    Ok(ModuleFile { name, over, cells, differential })
}

/// Monomials appearing in `a` that mention any generator outside `allowed`.
pub fn foreign_monomials(a: &Element, allowed: impl Fn(usize) -> bool) -> Vec<Monomial> {
    a.terms().keys().filter(|m| !m.generators().all(&allowed)).cloned().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cdga::TruncationWindow;
    use crate::linalg::q_frac;

    const E3: &str = "cdga E3 free\ngen x deg 1 wt 1\ngen y deg 1 wt 1\ngen z deg 1 wt 2\nd z = x*y\n";

    #[test]
    fn parses_e3() {
        let f = parse_cdga(E3).unwrap();
        assert_eq!(f.cdga.num_generators(), 3);
        assert!(f.cdga.validate(TruncationWindow::default()).passed());
        assert_eq!(f.cdga.fmt_element(f.cdga.differential_of(2)), "x*y");
    }

    #[test]
    fn rejects_weight_zero() {
        let e = parse_cdga("cdga A free\ngen x deg 1 wt 0\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }), "{e}");
    }

    #[test]
    fn rejects_empty_file() {
        assert!(parse_cdga("").is_err());
        assert!(parse_cdga("# only a comment\n\n").is_err());
    }

    #[test]
    fn reports_positions() {
        let e = parse_cdga("cdga A free\ngen x deg 1 wt 1\nd x = 2*q\n").unwrap_err();
        assert_eq!(e, Error::Parse { line: 3, column: 9, message: "undeclared generator `q`".into() });
        let e = parse_cdga("cdga A free\ngen x deg 1 wt 1\nd x = x\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, .. }));
    }

    #[test]
    fn rational_coefficients_and_tables() {
        let f = parse_cdga(
            "cdga T table\ngen a deg 1 wt 1\ngen b deg 1 wt 1\ngen c deg 2 wt 2\nmul a b = -3/6*c\n",
        )
        .unwrap();
        let a = &f.cdga;
        let ba = a.multiply(&a.gen("b"), &a.gen("a"));
        assert_eq!(ba, a.gen("c").scaled(&q_frac(1, 2)));
        assert!(a.validate(TruncationWindow::default()).passed());
    }

    #[test]
    fn module_files() {
        let a = parse_cdga(E3).unwrap().cdga;
        let m = parse_module("cell M over E3\nelt b0 deg 0 wt 0\nelt b1 deg 0 wt 1\nd b1 = x*b0 + y*b0\n", &a).unwrap();
        assert_eq!(m.cells.len(), 2);
        assert_eq!(m.differential[&1].len(), 1);
        assert!(parse_module("cell M over E3\nelt b0 deg 0 wt 0\nd b0 = x\n", &a).is_err());
        assert!(parse_module("cell M over E9\n", &a).is_err());
    }
}
