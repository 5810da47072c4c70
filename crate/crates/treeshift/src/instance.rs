//! Instance file parsing, serialization, and random instance generation.
//!
//! Grammar: `#` starts a comment; the first directive must be
//! `symbols: <tok> ...`; an optional `mode: forbidden` switches the block
//! list to the complement; every `block: <parent> <left> <right>` line names
//! one one-block. Tokens are whitespace-separated and line order beyond the
//! leading `symbols:` does not matter.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;
use std::fmt::Write as _;
use thiserror::Error;

use crate::tsft::{from_forbidden, Alphabet, AllowableSet, OneBlock, SymbolId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: missing `symbols:` directive before '{token}'")]
    MissingSymbols { line: usize, token: String },
    #[error("no `symbols:` directive found")]
    NoSymbols,
    #[error("line {line}: duplicate `{directive}` directive")]
    DuplicateDirective { line: usize, directive: String },
    #[error("line {line}: duplicate symbol '{name}'")]
    DuplicateSymbol { line: usize, name: String },
    #[error("line {line}: undeclared symbol '{token}'")]
    UndeclaredSymbol { line: usize, token: String },
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
}

/// A parsed instance together with non-fatal warnings (duplicate blocks).
#[derive(Clone, Debug)]
pub struct ParsedInstance {
    pub allowable: AllowableSet,
    pub warnings: Vec<String>,
}

pub fn parse_instance(text: &str) -> Result<ParsedInstance, ParseError> {
    let mut alphabet: Option<Alphabet> = None;
    let mut forbidden_mode: Option<bool> = None;
    let mut blocks: BTreeSet<OneBlock> = BTreeSet::new();
    let mut warnings = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let directive = tokens[0];
        match directive {
            "symbols:" => {
                if alphabet.is_some() {
                    return Err(ParseError::DuplicateDirective {
                        line: line_no,
                        directive: "symbols:".into(),
                    });
                }
                if tokens.len() == 1 {
                    return Err(ParseError::Malformed {
                        line: line_no,
                        reason: "`symbols:` needs at least one symbol".into(),
                    });
                }
                let mut seen = BTreeSet::new();
                for &tok in &tokens[1..] {
                    if !seen.insert(tok) {
                        return Err(ParseError::DuplicateSymbol {
                            line: line_no,
                            name: tok.to_string(),
                        });
                    }
                }
                alphabet = Some(
                    Alphabet::new(tokens[1..].iter().copied()).expect("tokens are deduplicated"),
                );
            }
            "mode:" => {
                let Some(_) = alphabet else {
                    return Err(ParseError::MissingSymbols {
                        line: line_no,
                        token: "mode:".into(),
                    });
                };
                if forbidden_mode.is_some() {
                    return Err(ParseError::DuplicateDirective {
                        line: line_no,
                        directive: "mode:".into(),
                    });
                }
                match tokens.get(1) {
                    Some(&"forbidden") => forbidden_mode = Some(true),
                    Some(&"allowable") => forbidden_mode = Some(false),
                    _ => {
                        return Err(ParseError::Malformed {
                            line: line_no,
                            reason: "`mode:` expects `allowable` or `forbidden`".into(),
                        })
                    }
                }
            }
            "block:" => {
                let Some(alphabet) = &alphabet else {
                    return Err(ParseError::MissingSymbols {
                        line: line_no,
                        token: "block:".into(),
                    });
                };
                if tokens.len() != 4 {
                    return Err(ParseError::Malformed {
                        line: line_no,
                        reason: "`block:` expects exactly parent, left, right".into(),
                    });
                }
                let mut ids = [SymbolId(0); 3];
                for (slot, &tok) in ids.iter_mut().zip(&tokens[1..]) {
                    *slot = alphabet.id_of(tok).ok_or(ParseError::UndeclaredSymbol {
                        line: line_no,
                        token: tok.to_string(),
                    })?;
                }
                let block = OneBlock::new(ids[0], ids[1], ids[2]);
                if !blocks.insert(block) {
                    warnings.push(format!(
                        "line {}: duplicate block `{} {} {}` ignored",
                        line_no, tokens[1], tokens[2], tokens[3]
                    ));
                }
            }
            other => {
                return Err(ParseError::Malformed {
                    line: line_no,
                    reason: format!("unknown directive '{}'", other),
                });
            }
        }
    }

    let alphabet = alphabet.ok_or(ParseError::NoSymbols)?;
    let allowable = if forbidden_mode == Some(true) {
        from_forbidden(alphabet, &blocks).expect("parsed blocks index the parsed alphabet")
    } else {
        AllowableSet::new(alphabet, blocks).expect("parsed blocks index the parsed alphabet")
    };
    Ok(ParsedInstance {
        allowable,
        warnings,
    })
}

/// Writes an instance back out in allowable mode, canonical block order.
pub fn serialize_instance(b: &AllowableSet) -> String {
    let mut out = String::new();
    let names: Vec<&str> = b.alphabet().names().collect();
    let _ = writeln!(out, "symbols: {}", names.join(" "));
    for block in b.blocks() {
        let _ = writeln!(
            out,
            "block: {} {} {}",
            b.alphabet().name(block.parent),
            b.alphabet().name(block.left),
            b.alphabet().name(block.right)
        );
    }
    out
}

/// Random instance over symbols `0..symbols`: each of the `symbols³` blocks
/// is included independently with probability `density`. Deterministic per
/// seed.
pub fn random_instance(symbols: usize, density: f64, seed: u64) -> AllowableSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_instance_with(&mut rng, symbols, density)
}

/// Same sampling, driven by a caller-owned generator so that instance
/// streams stay reproducible.
pub fn random_instance_with(
    rng: &mut impl Rng,
    symbols: usize,
    density: f64,
) -> AllowableSet {
    let alphabet =
        Alphabet::new((0..symbols).map(|i| i.to_string())).expect("numeric names are distinct");
    let mut blocks = Vec::new();
    for p in 0..symbols {
        for l in 0..symbols {
            for r in 0..symbols {
                if rng.random::<f64>() < density {
                    blocks.push(OneBlock::new(SymbolId(p), SymbolId(l), SymbolId(r)));
                }
            }
        }
    }
    AllowableSet::new(alphabet, blocks).expect("generated blocks index the alphabet")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tsft::tests_support::three_symbol_example;

    #[test]
    fn parses_the_three_symbol_example() {
        let text = "symbols: 0 1 2\nblock: 0 1 1\nblock: 1 2 2\nblock: 2 1 1\nblock: 0 1 2\n";
        let parsed = parse_instance(text).unwrap();
        assert_eq!(parsed.allowable, three_symbol_example());
        assert!(parsed.warnings.is_empty());
    }

    #[test]
    fn forbidden_mode_with_no_blocks_allows_everything() {
        let parsed = parse_instance("symbols: a\nmode: forbidden\n").unwrap();
        assert_eq!(parsed.allowable.len(), 1);
        assert!(parsed
            .allowable
            .contains(&OneBlock::new(SymbolId(0), SymbolId(0), SymbolId(0))));
    }

    #[test]
    fn block_before_symbols_is_an_error() {
        assert!(matches!(
            parse_instance("block: x y z\nsymbols: x y z\n"),
            Err(ParseError::MissingSymbols { line: 1, .. })
        ));
    }

    #[test]
    fn undeclared_symbols_carry_line_numbers() {
        let err = parse_instance("symbols: a b\nblock: a b c\n").unwrap_err();
        assert_eq!(
            err,
            ParseError::UndeclaredSymbol {
                line: 2,
                token: "c".into()
            }
        );
    }

    #[test]
    fn comments_and_duplicates() {
        let text = "# header\nsymbols: a  # trailing\nblock: a a a\nblock: a a a\n";
        let parsed = parse_instance(text).unwrap();
        assert_eq!(parsed.allowable.len(), 1);
        assert_eq!(parsed.warnings.len(), 1);
    }

    #[test]
    fn serialization_round_trips() {
        let b = three_symbol_example();
        let text = serialize_instance(&b);
        assert_eq!(parse_instance(&text).unwrap().allowable, b);
    }

    #[test]
    fn random_instances_are_deterministic_per_seed() {
        let a = random_instance(4, 0.3, 7);
        let b = random_instance(4, 0.3, 7);
        assert_eq!(a, b);
        let c = random_instance(4, 0.3, 8);
        assert_ne!(a, c);
        assert_eq!(parse_instance(&serialize_instance(&a)).unwrap().allowable, a);
    }
}
