//! Human-readable names for colors reported as hex strings.

const PALETTE: &[(&str, [u8; 3])] = &[
    // default categorical cycle
    ("dark blue", [0x1f, 0x77, 0xb4]),
    ("orange", [0xff, 0x7f, 0x0e]),
    ("green", [0x2c, 0xa0, 0x2c]),
    ("red", [0xd6, 0x27, 0x28]),
    ("purple", [0x94, 0x67, 0xbd]),
    ("brown", [0x8c, 0x56, 0x4b]),
    ("pink", [0xe3, 0x77, 0xc2]),
    ("gray", [0x7f, 0x7f, 0x7f]),
    ("olive", [0xbc, 0xbd, 0x22]),
    ("cyan", [0x17, 0xbe, 0xcf]),
    // basic colors
    ("black", [0, 0, 0]),
    ("white", [255, 255, 255]),
    ("red", [255, 0, 0]),
    ("green", [0, 128, 0]),
    ("blue", [0, 0, 255]),
    ("yellow", [255, 255, 0]),
    ("cyan", [0, 255, 255]),
    ("magenta", [255, 0, 255]),
    ("orange", [255, 165, 0]),
    ("purple", [128, 0, 128]),
    ("brown", [165, 42, 42]),
    ("pink", [255, 192, 203]),
    ("gray", [128, 128, 128]),
    ("light gray", [211, 211, 211]),
    ("dark gray", [64, 64, 64]),
    ("navy", [0, 0, 128]),
    ("teal", [0, 128, 128]),
    ("olive", [128, 128, 0]),
    ("maroon", [128, 0, 0]),
    ("lime", [0, 255, 0]),
    ("light blue", [173, 216, 230]),
    ("dark green", [0, 100, 0]),
    ("gold", [255, 215, 0]),
];

fn parse_hex(hex: &str) -> Option<[u8; 3]> {
    let h = hex.trim().trim_start_matches('#');
    if h.len() != 6 && h.len() != 8 {
        return None;
    }
    let byte = |i: usize| u8::from_str_radix(&h[i..i + 2], 16).ok();
    Some([byte(0)?, byte(2)?, byte(4)?])
}

/// Name of the palette entry nearest to `hex` in RGB space.
pub fn color_name(hex: &str) -> Option<String> {
    let rgb = parse_hex(hex)?;
    let dist = |c: &[u8; 3]| -> i32 {
        (0..3)
            .map(|i| {
                let d = rgb[i] as i32 - c[i] as i32;
                d * d
            })
            .sum()
    };
    PALETTE
        .iter()
        .min_by_key(|(_, c)| dist(c))
        .map(|(name, _)| name.to_string())
}
