//! Tagged-tree text format for maps: `kind(param=value, …){children}`.
//!
//! ```text
//! # one map per entry; '#' starts a comment
//! extremal(n=1, m=0.2)
//! compose {
//!   poly(n=1) { term(out=0, coef=[1, 0], pow=[2]) }
//!   auto(a=[0.3, 0])
//! }
//! ```
//!
//! Kinds: `identity(n)`, `poly(n){term(out, coef=[re,im], pow=[…])…}`,
//! `extremal(n, m)`, `auto(a=[re,im,…])`, `compose{outer … inner}`,
//! `stack{blocks…}`, `rotate(factor=[re,im], row){map}`, `scale(factor=[re,im]){map}`.

use std::fmt::Write;

use num_complex::Complex64;

use super::map::check_self_map;
use super::poly::{PolynomialMap, Term};
use super::HoloMap;
use crate::ball_geometry::BallPoint;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Value {
    Num(f64),
    List(Vec<f64>),
}

#[derive(Debug)]
struct Node {
    kind: String,
    params: Vec<(String, Value)>,
    children: Vec<Node>,
    line: usize,
    column: usize,
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    col: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Self {
            src: text.as_bytes(),
            pos: 0,
            line: 1,
            col: 1,
        }
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            line: self.line,
            column: self.col,
            message: message.into(),
        })
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek()?;
        self.pos += 1;
        if c == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            match c {
                b' ' | b'\t' | b'\r' | b'\n' | b',' | b';' => {
                    self.bump();
                }
                b'#' => {
                    while let Some(c) = self.bump() {
                        if c == b'\n' {
                            break;
                        }
                    }
                }
                _ => break,
            }
        }
    }

    fn expect(&mut self, ch: u8) -> Result<()> {
        self.skip_ws();
        if self.peek() == Some(ch) {
            self.bump();
            Ok(())
        } else {
            self.err(format!("expected '{}'", ch as char))
        }
    }

    fn ident(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == b'_' {
                self.bump();
            } else {
                break;
            }
        }
        if start == self.pos {
            return self.err("expected identifier");
        }
        Ok(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn number(&mut self) -> Result<f64> {
        self.skip_ws();
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || matches!(c, b'.' | b'-' | b'+') {
                self.bump();
            } else {
                break;
            }
        }
        let text = String::from_utf8_lossy(&self.src[start..self.pos]).into_owned();
        match text.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => self.err(format!("invalid number '{text}'")),
        }
    }

    fn value(&mut self) -> Result<Value> {
        self.skip_ws();
        if self.peek() == Some(b'[') {
            self.bump();
            let mut items = Vec::new();
            loop {
                self.skip_ws();
                if self.peek() == Some(b']') {
                    self.bump();
                    return Ok(Value::List(items));
                }
                if self.peek().is_none() {
                    return self.err("unterminated list");
                }
                items.push(self.number()?);
            }
        }
        Ok(Value::Num(self.number()?))
    }

    fn node(&mut self) -> Result<Node> {
        self.skip_ws();
        let (line, column) = (self.line, self.col);
        let kind = self.ident()?;
        let mut params = Vec::new();
        let mut children = Vec::new();
        self.skip_ws();
        if self.peek() == Some(b'(') {
            self.bump();
            loop {
                self.skip_ws();
                if self.peek() == Some(b')') {
                    self.bump();
                    break;
                }
                if self.peek().is_none() {
                    return self.err("unterminated parameter list");
                }
                let name = self.ident()?;
                self.expect(b'=')?;
                params.push((name, self.value()?));
            }
        }
        self.skip_ws();
        if self.peek() == Some(b'{') {
            self.bump();
            loop {
                self.skip_ws();
                if self.peek() == Some(b'}') {
                    self.bump();
                    break;
                }
                if self.peek().is_none() {
                    return self.err("unterminated child list");
                }
                children.push(self.node()?);
            }
        }
        Ok(Node {
            kind,
            params,
            children,
            line,
            column,
        })
    }
}

impl Node {
    fn fail<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            line: self.line,
            column: self.column,
            message: format!("{}: {}", self.kind, message.into()),
        })
    }

    fn param(&self, name: &str) -> Option<&Value> {
        self.params.iter().find(|(k, _)| k == name).map(|(_, v)| v)
    }

    fn num(&self, name: &str) -> Result<f64> {
        match self.param(name) {
            Some(Value::Num(v)) => Ok(*v),
            Some(_) => self.fail(format!("field '{name}' must be a number")),
            None => self.fail(format!("missing field '{name}'")),
        }
    }

    fn count(&self, name: &str) -> Result<usize> {
        let v = self.num(name)?;
        if v < 0.0 || v.fract() != 0.0 {
            return self.fail(format!("field '{name}' must be a non-negative integer"));
        }
        Ok(v as usize)
    }

    fn list(&self, name: &str) -> Result<&[f64]> {
        match self.param(name) {
            Some(Value::List(v)) => Ok(v),
            Some(_) => self.fail(format!("field '{name}' must be a list")),
            None => self.fail(format!("missing field '{name}'")),
        }
    }

    fn complex(&self, name: &str) -> Result<Complex64> {
        match self.list(name)? {
            [re, im] => Ok(Complex64::new(*re, *im)),
            _ => self.fail(format!("field '{name}' must be [re, im]")),
        }
    }

    fn only_child(&self) -> Result<HoloMap> {
        match self.children.as_slice() {
            [child] => child.to_map(),
            _ => self.fail("expects exactly one child"),
        }
    }

    fn to_map(&self) -> Result<HoloMap> {
        let wrap = |r: Result<HoloMap>| {
            r.and_then(|m| m.validate().map(|_| m))
                .or_else(|e| match e {
                    Error::Parse { .. } => Err(e),
                    other => self.fail(other.to_string()),
                })
        };
        match self.kind.as_str() {
            "identity" => wrap(Ok(HoloMap::identity(self.count("n")?))),
            "poly" => {
                let n = self.count("n")?;
                let mut components = vec![Vec::new(); n];
                for child in &self.children {
                    if child.kind != "term" {
                        return child.fail("expected 'term'");
                    }
                    let out = child.count("out")?;
                    if out >= n {
                        return child.fail(format!("out={out} exceeds dimension {n}"));
                    }
                    let powers = child
                        .list("pow")?
                        .iter()
                        .map(|&e| {
                            if e < 0.0 || e.fract() != 0.0 {
                                child.fail("exponents must be non-negative integers")
                            } else {
                                Ok(e as u32)
                            }
                        })
                        .collect::<Result<Vec<_>>>()?;
                    components[out].push(Term {
                        coef: child.complex("coef")?,
                        powers,
                    });
                }
                wrap(PolynomialMap::new(n, components).map(HoloMap::Polynomial))
            }
            "extremal" => wrap(HoloMap::extremal(self.num("m")?, self.count("n")?)),
            "auto" => wrap(
                BallPoint::from_interleaved(self.list("a")?)
                    .map(|a| crate::ball_geometry::mobius_auto(&a)),
            ),
            "compose" => {
                let maps = self
                    .children
                    .iter()
                    .map(Node::to_map)
                    .collect::<Result<Vec<_>>>()?;
                let composed = wrap(Ok(HoloMap::Composition { maps }))?;
                if let HoloMap::Composition { maps } = &composed {
                    for (inner, node) in maps.iter().zip(&self.children).skip(1) {
                        check_self_map(inner).or_else(|e| node.fail(e.to_string()))?;
                    }
                }
                Ok(composed)
            }
            "stack" => {
                let blocks = self
                    .children
                    .iter()
                    .map(Node::to_map)
                    .collect::<Result<Vec<_>>>()?;
                wrap(Ok(HoloMap::Stack { blocks }))
            }
            "rotate" => wrap(Ok(HoloMap::Rotation {
                factor: self.complex("factor")?,
                row: self.count("row")?,
                inner: Box::new(self.only_child()?),
            })),
            "scale" => wrap(Ok(HoloMap::Scaled {
                factor: self.complex("factor")?,
                inner: Box::new(self.only_child()?),
            })),
            other => self.fail(format!("unknown map kind '{other}'")),
        }
    }
}

/// Parses every map in `text`; an input with no maps is an error.
pub fn parse_maps(text: &str) -> Result<Vec<HoloMap>> {
    let mut p = Parser::new(text);
    let mut out = Vec::new();
    loop {
        p.skip_ws();
        if p.peek().is_none() {
            break;
        }
        out.push(p.node()?.to_map()?);
    }
    if out.is_empty() {
        return p.err("no maps found");
    }
    Ok(out)
}

/// Parses exactly one map.
pub fn parse_map(text: &str) -> Result<HoloMap> {
    let mut maps = parse_maps(text)?;
    if maps.len() != 1 {
        return Err(Error::Parse {
            line: 1,
            column: 1,
            message: format!("expected one map, found {}", maps.len()),
        });
    }
    Ok(maps.remove(0))
}

fn fmt_complex(c: Complex64) -> String {
    format!("[{:?}, {:?}]", c.re, c.im)
}

fn write_map(out: &mut String, map: &HoloMap, depth: usize) {
    let pad = "  ".repeat(depth);
    match map {
        HoloMap::Polynomial(p) => {
            let _ = writeln!(out, "{pad}poly(n={}) {{", p.dim());
            for (k, comp) in p.components().iter().enumerate() {
                for t in comp {
                    let pow: Vec<String> = t.powers.iter().map(u32::to_string).collect();
                    let _ = writeln!(
                        out,
                        "{pad}  term(out={k}, coef={}, pow=[{}])",
                        fmt_complex(t.coef),
                        pow.join(", ")
                    );
                }
            }
            let _ = writeln!(out, "{pad}}}");
        }
        HoloMap::Extremal(e) => {
            let _ = writeln!(out, "{pad}extremal(n={}, m={:?})", e.dim(), e.m());
        }
        HoloMap::Automorphism(a) => {
            let coords: Vec<String> = a
                .anchor()
                .to_interleaved()
                .iter()
                .map(|x| format!("{x:?}"))
                .collect();
            let _ = writeln!(out, "{pad}auto(a=[{}])", coords.join(", "));
        }
        HoloMap::Composition { maps } => {
            let _ = writeln!(out, "{pad}compose {{");
            for m in maps {
                write_map(out, m, depth + 1);
            }
            let _ = writeln!(out, "{pad}}}");
        }
        HoloMap::Stack { blocks } => {
            let _ = writeln!(out, "{pad}stack {{");
            for m in blocks {
                write_map(out, m, depth + 1);
            }
            let _ = writeln!(out, "{pad}}}");
        }
        HoloMap::Rotation { factor, row, inner } => {
            let _ = writeln!(
                out,
                "{pad}rotate(factor={}, row={row}) {{",
                fmt_complex(*factor)
            );
            write_map(out, inner, depth + 1);
            let _ = writeln!(out, "{pad}}}");
        }
        HoloMap::Scaled { factor, inner } => {
            let _ = writeln!(out, "{pad}scale(factor={}) {{", fmt_complex(*factor));
            write_map(out, inner, depth + 1);
            let _ = writeln!(out, "{pad}}}");
        }
    }
}

pub fn to_text(map: &HoloMap) -> String {
    let mut out = String::new();
    write_map(&mut out, map, 0);
    out
}

pub fn maps_to_text(maps: &[HoloMap]) -> String {
    maps.iter().map(to_text).collect::<Vec<_>>().join("\n")
}
