//! Formal SignWriting (FSW) parsing, tokenization and detokenization.
//!
//! An FSW sign is a box marker (`B`, `L`, `M` or `R`) with a coordinate pair,
//! followed by symbol groups `S<base><fill><rotation><x>x<y>`: a 3-hex-digit
//! base in `[0x100, 0x38f]`, a fill digit `0-5`, a rotation hex digit and a
//! position. Positions are integers in `[250, 749]`. The token alphabet is
//! closed: 4 boxes + 656 symbols + 6 fills + 16 rotations + 500 positions =
//! 1182 tokens. Token streams serialize space-separated, one sign sequence
//! per line.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub const SYMBOL_BASE_MIN: u16 = 0x100;
pub const SYMBOL_BASE_MAX: u16 = 0x38f;
pub const POSITION_MIN: u16 = 250;
pub const POSITION_MAX: u16 = 749;
pub const FILL_MAX: u8 = 5;

/// Total size of the closed token vocabulary.
pub const VOCABULARY_SIZE: usize = 4 + 656 + 6 + 16 + 500;

#[derive(Debug, Error)]
pub enum FswError {
    #[error("expected a box marker (B, L, M, R) at byte {0}")]
    BadBox(usize),
    #[error("bad symbol code at byte {0}: {1}")]
    BadSymbolCode(usize, String),
    #[error("bad coordinate at byte {0}: {1}")]
    BadCoordinate(usize, String),
    #[error("trailing garbage at byte {0}")]
    TrailingGarbage(usize),
    #[error("malformed token stream: {0}")]
    MalformedStream(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoxMarker {
    B,
    L,
    M,
    R,
}

impl BoxMarker {
    pub const ALL: [BoxMarker; 4] = [BoxMarker::B, BoxMarker::L, BoxMarker::M, BoxMarker::R];

    fn from_char(c: char) -> Option<Self> {
        match c {
            'B' => Some(BoxMarker::B),
            'L' => Some(BoxMarker::L),
            'M' => Some(BoxMarker::M),
            'R' => Some(BoxMarker::R),
            _ => None,
        }
    }
}

impl fmt::Display for BoxMarker {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            BoxMarker::B => 'B',
            BoxMarker::L => 'L',
            BoxMarker::M => 'M',
            BoxMarker::R => 'R',
        };
        write!(f, "{c}")
    }
}

/// One symbol of a sign: base shape, fill and rotation modifiers, position.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FswGrapheme {
    pub base: u16,
    pub fill: u8,
    pub rotation: u8,
    pub x: u16,
    pub y: u16,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FswSign {
    pub box_marker: BoxMarker,
    pub box_position: (u16, u16),
    pub graphemes: Vec<FswGrapheme>,
}

/// One element of the closed 1182-token vocabulary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FswToken {
    Box(BoxMarker),
    /// Symbol base, rendered `S14c`.
    Symbol(u16),
    /// Fill modifier, rendered `c2`.
    Fill(u8),
    /// Rotation modifier, rendered `r0`.
    Rotation(u8),
    /// Position, rendered `p518`.
    Position(u16),
}

impl fmt::Display for FswToken {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FswToken::Box(b) => write!(f, "{b}"),
            FswToken::Symbol(base) => write!(f, "S{base:03x}"),
            FswToken::Fill(v) => write!(f, "c{v}"),
            FswToken::Rotation(v) => write!(f, "r{v:x}"),
            FswToken::Position(v) => write!(f, "p{v}"),
        }
    }
}

impl FromStr for FswToken {
    type Err = FswError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || FswError::MalformedStream(format!("unknown token {s:?}"));
        if s.len() == 1 {
            return BoxMarker::from_char(s.chars().next().unwrap()).map(FswToken::Box).ok_or_else(bad);
        }
        let (prefix, rest) = s.split_at(1);
        match prefix {
            "S" => {
                if rest.len() != 3 || !rest.chars().all(|c| c.is_ascii_hexdigit() && !c.is_ascii_uppercase()) {
                    return Err(bad());
                }
                let base = u16::from_str_radix(rest, 16).map_err(|_| bad())?;
                if !(SYMBOL_BASE_MIN..=SYMBOL_BASE_MAX).contains(&base) {
                    return Err(bad());
                }
                Ok(FswToken::Symbol(base))
            }
            "c" => {
                let v: u8 = rest.parse().map_err(|_| bad())?;
                if v > FILL_MAX {
                    return Err(bad());
                }
                Ok(FswToken::Fill(v))
            }
            "r" => {
                if rest.len() != 1 {
                    return Err(bad());
                }
                let v = u8::from_str_radix(rest, 16).map_err(|_| bad())?;
                Ok(FswToken::Rotation(v))
            }
            "p" => {
                let v: u16 = rest.parse().map_err(|_| bad())?;
                if !(POSITION_MIN..=POSITION_MAX).contains(&v) {
                    return Err(bad());
                }
                Ok(FswToken::Position(v))
            }
            _ => Err(bad()),
        }
    }
}

/// A flat token sequence covering one or more signs.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FswTokenStream {
    pub tokens: Vec<FswToken>,
}

impl fmt::Display for FswTokenStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.tokens.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

impl FromStr for FswTokenStream {
    type Err = FswError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let tokens = s
            .split_whitespace()
            .map(FswToken::from_str)
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self { tokens })
    }
}

struct Scanner<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Scanner<'a> {
    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn skip_whitespace(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.bump();
        }
    }

    /// Exactly three decimal digits forming a coordinate in [250, 749].
    fn coordinate(&mut self) -> Result<u16, FswError> {
        let at = self.pos;
        let mut value = 0u16;
        for _ in 0..3 {
            match self.peek() {
                Some(c) if c.is_ascii_digit() => {
                    value = value * 10 + c.to_digit(10).unwrap() as u16;
                    self.bump();
                }
                _ => {
                    return Err(FswError::BadCoordinate(at, "expected 3 decimal digits".into()))
                }
            }
        }
        if !(POSITION_MIN..=POSITION_MAX).contains(&value) {
            return Err(FswError::BadCoordinate(at, format!("{value} outside [250, 749]")));
        }
        Ok(value)
    }

    fn coordinate_pair(&mut self) -> Result<(u16, u16), FswError> {
        let x = self.coordinate()?;
        match self.bump() {
            Some('x') => {}
            _ => {
                return Err(FswError::BadCoordinate(
                    self.pos,
                    "expected 'x' between coordinates".into(),
                ))
            }
        }
        let y = self.coordinate()?;
        Ok((x, y))
    }

    /// `S<base><fill><rotation>` with the leading `S` already consumed.
    fn symbol_id(&mut self) -> Result<(u16, u8, u8), FswError> {
        let at = self.pos;
        let mut base = 0u16;
        for _ in 0..3 {
            match self.peek() {
                Some(c) if c.is_ascii_hexdigit() && !c.is_ascii_uppercase() => {
                    base = base * 16 + c.to_digit(16).unwrap() as u16;
                    self.bump();
                }
                _ => {
                    return Err(FswError::BadSymbolCode(
                        at,
                        "expected 3 lowercase hex digits".into(),
                    ))
                }
            }
        }
        if !(SYMBOL_BASE_MIN..=SYMBOL_BASE_MAX).contains(&base) {
            return Err(FswError::BadSymbolCode(at, format!("base {base:#x} outside [0x100, 0x38f]")));
        }
        let fill = match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let v = c.to_digit(10).unwrap() as u8;
                if v > FILL_MAX {
                    return Err(FswError::BadSymbolCode(self.pos, format!("fill {v} outside 0-5")));
                }
                self.bump();
                v
            }
            _ => return Err(FswError::BadSymbolCode(self.pos, "expected a fill digit".into())),
        };
        let rotation = match self.peek() {
            Some(c) if c.is_ascii_hexdigit() && !c.is_ascii_uppercase() => {
                self.bump();
                c.to_digit(16).unwrap() as u8
            }
            _ => {
                return Err(FswError::BadSymbolCode(self.pos, "expected a rotation hex digit".into()))
            }
        };
        Ok((base, fill, rotation))
    }

    fn sign(&mut self) -> Result<FswSign, FswError> {
        // Full FSW may carry an 'A'-prefixed temporal sorting sequence; the
        // tokenization drops it, so it is skipped here with a warning.
        if self.peek() == Some('A') {
            log::warn!("ignoring 'A'-prefixed sorting sequence at byte {}", self.pos);
            self.bump();
            while self.peek() == Some('S') {
                self.bump();
                self.symbol_id()?;
            }
        }
        let at = self.pos;
        let box_marker = match self.bump() {
            Some(c) => BoxMarker::from_char(c).ok_or(FswError::BadBox(at))?,
            None => return Err(FswError::BadBox(at)),
        };
        let box_position = self.coordinate_pair()?;
        let mut graphemes = Vec::new();
        while self.peek() == Some('S') {
            self.bump();
            let (base, fill, rotation) = self.symbol_id()?;
            let (x, y) = self.coordinate_pair()?;
            graphemes.push(FswGrapheme { base, fill, rotation, x, y });
        }
        Ok(FswSign { box_marker, box_position, graphemes })
    }
}

/// Parses a string of zero or more FSW signs separated by whitespace.
pub fn parse_fsw(text: &str) -> Result<Vec<FswSign>, FswError> {
    let mut scanner = Scanner { text, pos: 0 };
    let mut signs = Vec::new();
    loop {
        scanner.skip_whitespace();
        if scanner.peek().is_none() {
            return Ok(signs);
        }
        match scanner.peek() {
            Some(c) if c == 'A' || BoxMarker::from_char(c).is_some() => {
                signs.push(scanner.sign()?);
            }
            Some(_) if signs.is_empty() => return Err(FswError::BadBox(scanner.pos)),
            Some(_) => return Err(FswError::TrailingGarbage(scanner.pos)),
            None => unreachable!(),
        }
    }
}

/// Emits the token sequence of one sign: box token, two positions, then per
/// grapheme a symbol, fill, rotation and two positions. The `x` separators
/// and the symbol-embedded modifier digits are absorbed into the structured
/// tokens, so a sign always yields `3 + 5 * graphemes` tokens.
pub fn tokenize(sign: &FswSign) -> FswTokenStream {
    let mut tokens = Vec::with_capacity(3 + 5 * sign.graphemes.len());
    tokens.push(FswToken::Box(sign.box_marker));
    tokens.push(FswToken::Position(sign.box_position.0));
    tokens.push(FswToken::Position(sign.box_position.1));
    for g in &sign.graphemes {
        tokens.push(FswToken::Symbol(g.base));
        tokens.push(FswToken::Fill(g.fill));
        tokens.push(FswToken::Rotation(g.rotation));
        tokens.push(FswToken::Position(g.x));
        tokens.push(FswToken::Position(g.y));
    }
    FswTokenStream { tokens }
}

/// Tokenizes a whole parse result into one stream.
pub fn tokenize_all(signs: &[FswSign]) -> FswTokenStream {
    let mut tokens = Vec::new();
    for sign in signs {
        tokens.extend(tokenize(sign).tokens);
    }
    FswTokenStream { tokens }
}

/// Inverse of [`tokenize`]: renders a structurally valid token stream back
/// into FSW text. The stream must be box, two positions, then whole 5-token
/// grapheme groups, repeated per sign.
pub fn detokenize(stream: &FswTokenStream) -> Result<String, FswError> {
    use FswToken as T;
    let mut out = String::new();
    let mut iter = stream.tokens.iter().copied().peekable();

    let position = |t: Option<T>| -> Result<u16, FswError> {
        match t {
            Some(T::Position(v)) => Ok(v),
            other => Err(FswError::MalformedStream(format!("expected a position token, found {other:?}"))),
        }
    };

    while let Some(first) = iter.next() {
        let T::Box(box_marker) = first else {
            return Err(FswError::MalformedStream(format!(
                "expected a box token, found {first:?}"
            )));
        };
        let x = position(iter.next())?;
        let y = position(iter.next())?;
        out.push_str(&format!("{box_marker}{x}x{y}"));
        while matches!(iter.peek(), Some(T::Symbol(_))) {
            let Some(T::Symbol(base)) = iter.next() else { unreachable!() };
            let fill = match iter.next() {
                Some(T::Fill(v)) => v,
                other => {
                    return Err(FswError::MalformedStream(format!(
                        "expected a fill token, found {other:?}"
                    )))
                }
            };
            let rotation = match iter.next() {
                Some(T::Rotation(v)) => v,
                other => {
                    return Err(FswError::MalformedStream(format!(
                        "expected a rotation token, found {other:?}"
                    )))
                }
            };
            let x = position(iter.next())?;
            let y = position(iter.next())?;
            out.push_str(&format!("S{base:03x}{fill}{rotation:x}{x}x{y}"));
        }
    }
    Ok(out)
}

/// The full token vocabulary in its canonical order: boxes, symbols
/// ascending, fills, rotations, positions ascending.
pub fn vocabulary() -> Vec<String> {
    let mut vocab = Vec::with_capacity(VOCABULARY_SIZE);
    for b in BoxMarker::ALL {
        vocab.push(b.to_string());
    }
    for base in SYMBOL_BASE_MIN..=SYMBOL_BASE_MAX {
        vocab.push(FswToken::Symbol(base).to_string());
    }
    for fill in 0..=FILL_MAX {
        vocab.push(FswToken::Fill(fill).to_string());
    }
    for rotation in 0..=0xf {
        vocab.push(FswToken::Rotation(rotation).to_string());
    }
    for position in POSITION_MIN..=POSITION_MAX {
        vocab.push(FswToken::Position(position).to_string());
    }
    debug_assert_eq!(vocab.len(), VOCABULARY_SIZE);
    vocab
}

#[cfg(test)]
mod tests {
    use super::*;

    const HELLO: &str = "M518x529S14c20481x471S27106503x489";

    #[test]
    fn parses_the_hello_sign() {
        let signs = parse_fsw(HELLO).unwrap();
        assert_eq!(signs.len(), 1);
        let sign = &signs[0];
        assert_eq!(sign.box_marker, BoxMarker::M);
        assert_eq!(sign.box_position, (518, 529));
        assert_eq!(
            sign.graphemes,
            vec![
                FswGrapheme { base: 0x14c, fill: 2, rotation: 0, x: 481, y: 471 },
                FswGrapheme { base: 0x271, fill: 0, rotation: 6, x: 503, y: 489 },
            ]
        );
    }

    #[test]
    fn empty_input_parses_to_no_signs() {
        assert_eq!(parse_fsw("").unwrap(), vec![]);
        assert_eq!(parse_fsw("  \n ").unwrap(), vec![]);
    }

    #[test]
    fn symbol_base_out_of_range_is_rejected() {
        let err = parse_fsw("M518x529S99920481x471").unwrap_err();
        assert!(matches!(err, FswError::BadSymbolCode(..)), "{err:?}");
    }

    #[test]
    fn coordinate_out_of_range_is_rejected() {
        assert!(matches!(parse_fsw("M518x929"), Err(FswError::BadCoordinate(..))));
        assert!(matches!(parse_fsw("M518x249"), Err(FswError::BadCoordinate(..))));
    }

    #[test]
    fn garbage_is_rejected() {
        assert!(matches!(parse_fsw("Z518x529"), Err(FswError::BadBox(0))));
        assert!(matches!(parse_fsw("M518x529 !"), Err(FswError::TrailingGarbage(_))));
    }

    #[test]
    fn sorting_prefix_is_stripped() {
        let with_prefix = format!("AS14c20S27106{HELLO}");
        assert_eq!(parse_fsw(&with_prefix).unwrap(), parse_fsw(HELLO).unwrap());
    }

    #[test]
    fn tokenization_matches_the_worked_example() {
        let signs = parse_fsw(HELLO).unwrap();
        let stream = tokenize(&signs[0]);
        assert_eq!(
            stream.to_string(),
            "M p518 p529 S14c c2 r0 p481 p471 S271 c0 r6 p503 p489"
        );
        assert_eq!(stream.tokens.len(), 3 + 5 * 2);
    }

    #[test]
    fn box_only_sign_yields_three_tokens() {
        let signs = parse_fsw("L250x749").unwrap();
        assert_eq!(tokenize(&signs[0]).tokens.len(), 3);
    }

    #[test]
    fn detokenize_inverts_tokenize() {
        let signs = parse_fsw(HELLO).unwrap();
        let text = detokenize(&tokenize_all(&signs)).unwrap();
        assert_eq!(text, HELLO);
        assert_eq!(detokenize(&FswTokenStream::default()).unwrap(), "");
    }

    #[test]
    fn multi_sign_roundtrip() {
        let text = "M518x529S14c20481x471 R501x500S10011490x490";
        let signs = parse_fsw(text).unwrap();
        assert_eq!(signs.len(), 2);
        let rendered = detokenize(&tokenize_all(&signs)).unwrap();
        assert_eq!(parse_fsw(&rendered).unwrap(), signs);
    }

    #[test]
    fn truncated_stream_is_malformed() {
        let signs = parse_fsw(HELLO).unwrap();
        let mut stream = tokenize(&signs[0]);
        stream.tokens.pop();
        assert!(matches!(detokenize(&stream), Err(FswError::MalformedStream(_))));
    }

    #[test]
    fn vocabulary_has_the_documented_order_and_size() {
        let vocab = vocabulary();
        assert_eq!(vocab.len(), 1182);
        assert_eq!(vocab[0], "B");
        assert_eq!(vocab[4], "S100");
        assert!(vocab.contains(&"p250".to_string()));
        assert!(vocab.contains(&"p749".to_string()));
        assert!(!vocab.contains(&"p249".to_string()));
    }

    #[test]
    fn every_emitted_token_is_in_the_vocabulary() {
        let vocab: std::collections::HashSet<String> = vocabulary().into_iter().collect();
        let signs = parse_fsw(HELLO).unwrap();
        for token in tokenize_all(&signs).tokens {
            assert!(vocab.contains(&token.to_string()), "{token}");
        }
    }

    #[test]
    fn token_stream_text_roundtrip() {
        let signs = parse_fsw(HELLO).unwrap();
        let stream = tokenize_all(&signs);
        let parsed: FswTokenStream = stream.to_string().parse().unwrap();
        assert_eq!(parsed, stream);
    }
}
