//! Binary PGM (`P5`) and PPM (`P6`) with maxval 255.

use std::io::{BufRead, Write};

use super::Pixmap;
use crate::error::{Error, Result};

fn header_token<R: BufRead>(src: &mut R) -> Result<String> {
    let mut tok = Vec::new();
    let mut byte = [0u8; 1];
    loop {
        if src.read(&mut byte)? == 0 {
            break;
        }
        match byte[0] {
            b'#' if tok.is_empty() => {
                let mut skip = Vec::new();
                src.read_until(b'\n', &mut skip)?;
            }
            b if b.is_ascii_whitespace() => {
                if !tok.is_empty() {
                    break;
                }
            }
            b => tok.push(b),
        }
    }
    if tok.is_empty() {
        return Err(Error::parse(0, "truncated PNM header"));
    }
    String::from_utf8(tok).map_err(|_| Error::parse(0, "non-ASCII PNM header"))
}

fn header_number<R: BufRead>(src: &mut R, what: &str) -> Result<usize> {
    let tok = header_token(src)?;
    tok.parse()
        .map_err(|_| Error::parse(0, format!("invalid PNM {what} '{tok}'")))
}

pub fn read_pnm<R: BufRead>(mut src: R) -> Result<Pixmap> {
    let channels = match header_token(&mut src)?.as_str() {
        "P5" => 1,
        "P6" => 3,
        other => return Err(Error::parse(0, format!("unsupported PNM magic '{other}'"))),
    };
    let width = header_number(&mut src, "width")?;
    let height = header_number(&mut src, "height")?;
    let maxval = header_number(&mut src, "maxval")?;
    if maxval != 255 {
        return Err(Error::parse(0, format!("only maxval 255 is supported, found {maxval}")));
    }
    let mut data = vec![0u8; width * height * channels];
    src.read_exact(&mut data)
        .map_err(|_| Error::parse(0, "PNM pixel data is truncated"))?;
    Pixmap::new(width, height, channels, data)
}

pub fn write_pnm<W: Write>(img: &Pixmap, mut sink: W) -> Result<()> {
    let magic = if img.channels() == 1 { "P5" } else { "P6" };
    write!(sink, "{magic}\n{} {}\n255\n", img.width(), img.height())?;
    sink.write_all(img.data())?;
    Ok(())
}
