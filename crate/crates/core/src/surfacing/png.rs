//! Reading and writing the `alt` text chunk of PNG files.

use crate::error::{AltTextError, Result};

const SIGNATURE: [u8; 8] = [0x89, b'P', b'N', b'G', 0x0d, 0x0a, 0x1a, 0x0a];
pub const ALT_KEYWORD: &str = "alt";

struct Chunk<'a> {
    kind: [u8; 4],
    data: &'a [u8],
}

fn chunks(png: &[u8]) -> Result<Vec<Chunk<'_>>> {
    if png.len() < 8 || png[..8] != SIGNATURE {
        return Err(AltTextError::Png("missing PNG signature".into()));
    }
    let mut out = Vec::new();
    let mut pos = 8;
    while pos < png.len() {
        let header = png
            .get(pos..pos + 8)
            .ok_or_else(|| AltTextError::Png(format!("truncated chunk header at byte {pos}")))?;
        let len = u32::from_be_bytes([header[0], header[1], header[2], header[3]]) as usize;
        let kind = [header[4], header[5], header[6], header[7]];
        let data = png
            .get(pos + 8..pos + 8 + len)
            .ok_or_else(|| AltTextError::Png(format!("truncated chunk data at byte {pos}")))?;
        if png.len() < pos + 12 + len {
            return Err(AltTextError::Png(format!("missing CRC at byte {}", pos + 8 + len)));
        }
        out.push(Chunk { kind, data });
        pos += 12 + len;
        if &kind == b"IEND" {
            break;
        }
    }
    match out.first() {
        Some(c) if &c.kind == b"IHDR" => Ok(out),
        _ => Err(AltTextError::Png("first chunk is not IHDR".into())),
    }
}

fn write_chunk(out: &mut Vec<u8>, kind: &[u8; 4], data: &[u8]) {
    out.extend_from_slice(&(data.len() as u32).to_be_bytes());
    out.extend_from_slice(kind);
    out.extend_from_slice(data);
    let mut crc = crc32fast::Hasher::new();
    crc.update(kind);
    crc.update(data);
    out.extend_from_slice(&crc.finalize().to_be_bytes());
}

/// Keyword of a tEXt/iTXt chunk, if `chunk` is one.
fn text_keyword<'a>(chunk: &Chunk<'a>) -> Option<&'a [u8]> {
    if &chunk.kind != b"tEXt" && &chunk.kind != b"iTXt" {
        return None;
    }
    let end = chunk.data.iter().position(|b| *b == 0)?;
    Some(&chunk.data[..end])
}

fn latin1(text: &str) -> Option<Vec<u8>> {
    text.chars().map(|c| u8::try_from(u32::from(c)).ok()).collect()
}

/// Returns `png` with its alt text set to `text`, replacing any previous
/// alt chunk. Latin-1 text goes in a tEXt chunk, anything else in iTXt.
pub fn embed_alt_text(png: &[u8], text: &str) -> Result<Vec<u8>> {
    let parsed = chunks(png)?;
    let mut out = Vec::with_capacity(png.len() + text.len() + 32);
    out.extend_from_slice(&SIGNATURE);
    for (i, chunk) in parsed.iter().enumerate() {
        if text_keyword(chunk) == Some(ALT_KEYWORD.as_bytes()) {
            continue;
        }
        write_chunk(&mut out, &chunk.kind, chunk.data);
        if i == 0 {
            let mut data = ALT_KEYWORD.as_bytes().to_vec();
            data.push(0);
            match latin1(text) {
                Some(bytes) => {
                    data.extend(bytes);
                    write_chunk(&mut out, b"tEXt", &data);
                }
                None => {
                    // compression flag, method, empty language tag and translated keyword
                    data.extend_from_slice(&[0, 0, 0, 0]);
                    data.extend_from_slice(text.as_bytes());
                    write_chunk(&mut out, b"iTXt", &data);
                }
            }
        }
    }
    Ok(out)
}

/// Alt text stored in `png`, if any.
pub fn read_alt_text(png: &[u8]) -> Result<Option<String>> {
    for chunk in chunks(png)? {
        if text_keyword(&chunk) != Some(ALT_KEYWORD.as_bytes()) {
            continue;
        }
        let body = &chunk.data[ALT_KEYWORD.len() + 1..];
        if &chunk.kind == b"tEXt" {
            return Ok(Some(body.iter().map(|b| char::from(*b)).collect()));
        }
        // iTXt: flag, method, language\0, translated\0, text
        if body.len() < 2 || body[0] != 0 {
            return Err(AltTextError::Png("compressed iTXt alt chunk is not supported".into()));
        }
        let rest = &body[2..];
        let lang_end = rest
            .iter()
            .position(|b| *b == 0)
            .ok_or_else(|| AltTextError::Png("bad iTXt".into()))?;
        let rest = &rest[lang_end + 1..];
        let tr_end = rest
            .iter()
            .position(|b| *b == 0)
            .ok_or_else(|| AltTextError::Png("bad iTXt".into()))?;
        let text = String::from_utf8(rest[tr_end + 1..].to_vec()).map_err(|e| AltTextError::Png(e.to_string()))?;
        return Ok(Some(text));
    }
    Ok(None)
}
