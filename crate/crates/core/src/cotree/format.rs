//! Text format: a leaf is its decimal label or `*`; an internal node is
//! `(d c1 c2 ...)` with `d` in {0, 1} and at least two children, tokens
//! separated by single spaces. Example: `(1 1 (0 2 3))`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use super::{Cotree, CotreeBuilder, CotreeError, Decoration, NodeId};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("unexpected token `{token}` at byte {pos}")]
    UnexpectedToken { token: String, pos: usize },
    #[error("trailing input at byte {0}")]
    Trailing(usize),
    #[error("cannot mix labeled and unlabeled leaves")]
    MixedLabels,
    #[error(transparent)]
    Invalid(#[from] CotreeError),
}

#[derive(Debug, PartialEq)]
enum Token<'a> {
    Open,
    Close,
    Word(&'a str),
}

fn tokens(s: &str) -> impl Iterator<Item = (usize, Token<'_>)> {
    let bytes = s.as_bytes();
    let mut i = 0;
    std::iter::from_fn(move || {
        while i < bytes.len() && bytes[i].is_ascii_whitespace() {
            i += 1;
        }
        if i >= bytes.len() {
            return None;
        }
        let start = i;
        match bytes[i] {
            b'(' => {
                i += 1;
                Some((start, Token::Open))
            }
            b')' => {
                i += 1;
                Some((start, Token::Close))
            }
            _ => {
                while i < bytes.len() && !bytes[i].is_ascii_whitespace() && bytes[i] != b'(' && bytes[i] != b')' {
                    i += 1;
                }
                Some((start, Token::Word(&s[start..i])))
            }
        }
    })
}

impl FromStr for Cotree {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut b = CotreeBuilder::new();
        // open frames: decoration (once read) and collected children
        let mut frames: Vec<(Option<Decoration>, Vec<NodeId>)> = Vec::new();
        let mut root: Option<NodeId> = None;
        let mut labeled: Option<bool> = None;
        let mut toks = tokens(s);
        for (pos, tok) in toks.by_ref() {
            let unexpected = |t: &str| ParseError::UnexpectedToken { token: t.to_string(), pos };
            let finished = match tok {
                Token::Open => {
                    if frames.is_empty() && root.is_some() {
                        return Err(ParseError::Trailing(pos));
                    }
                    frames.push((None, Vec::new()));
                    None
                }
                Token::Close => {
                    let (dec, kids) = frames.pop().ok_or_else(|| unexpected(")"))?;
                    let dec = dec.ok_or_else(|| unexpected(")"))?;
                    if kids.len() < 2 {
                        return Err(unexpected(")"));
                    }
                    Some(b.internal(dec, &kids))
                }
                Token::Word(w) => match frames.last_mut() {
                    Some((dec @ None, _)) => {
                        *dec = Some(match w {
                            "0" => Decoration::Zero,
                            "1" => Decoration::One,
                            _ => return Err(unexpected(w)),
                        });
                        None
                    }
                    _ => {
                        if frames.is_empty() && root.is_some() {
                            return Err(ParseError::Trailing(pos));
                        }
                        let is_labeled = w != "*";
                        if *labeled.get_or_insert(is_labeled) != is_labeled {
                            return Err(ParseError::MixedLabels);
                        }
                        if is_labeled {
                            let label: u32 = w.parse().map_err(|_| unexpected(w))?;
                            if label == 0 {
                                return Err(unexpected(w));
                            }
                            Some(b.labeled_leaf(label))
                        } else {
                            Some(b.leaf())
                        }
                    }
                },
            };
            if let Some(id) = finished {
                match frames.last_mut() {
                    Some((_, kids)) => kids.push(id),
                    None => root = Some(id),
                }
            }
        }
        if !frames.is_empty() || root.is_none() {
            return Err(ParseError::UnexpectedEnd);
        }
        Ok(b.finish()?)
    }
}

impl fmt::Display for Cotree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        enum Step {
            Enter(NodeId),
            Close,
        }
        let mut stack = vec![Step::Enter(self.root())];
        let mut first = true;
        while let Some(step) = stack.pop() {
            match step {
                Step::Close => f.write_str(")")?,
                Step::Enter(v) => {
                    if !first {
                        f.write_str(" ")?;
                    }
                    first = false;
                    match self.decoration(v) {
                        None => match self.label(v) {
                            Some(l) => write!(f, "{l}")?,
                            None => f.write_str("*")?,
                        },
                        Some(d) => {
                            write!(f, "({d}")?;
                            stack.push(Step::Close);
                            stack.extend(self.children(v).rev().map(Step::Enter));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}
