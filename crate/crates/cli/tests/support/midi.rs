//! Minimal standalone SMF reader for checking written files.

#[derive(Debug, PartialEq)]
pub struct Parsed {
    pub division: u16,
    pub tempo_usec: Option<u32>,
    /// (key, duration in ticks)
    pub notes: Vec<(u8, u32)>,
}

fn be32(b: &[u8]) -> u32 {
    u32::from_be_bytes([b[0], b[1], b[2], b[3]])
}

fn var_len(b: &[u8], pos: &mut usize) -> u32 {
    let mut v = 0u32;
    loop {
        let byte = b[*pos];
        *pos += 1;
        v = (v << 7) | (byte & 0x7f) as u32;
        if byte & 0x80 == 0 {
            return v;
        }
    }
}

pub fn parse(b: &[u8]) -> Parsed {
    assert_eq!(&b[0..4], b"MThd");
    assert_eq!(be32(&b[4..8]), 6);
    assert_eq!(u16::from_be_bytes([b[8], b[9]]), 0, "format 0");
    assert_eq!(u16::from_be_bytes([b[10], b[11]]), 1, "one track");
    let division = u16::from_be_bytes([b[12], b[13]]);
    assert_eq!(&b[14..18], b"MTrk");
    let len = be32(&b[18..22]) as usize;
    assert_eq!(b.len(), 22 + len);
    let track = &b[22..];
    let (mut pos, mut now, mut status) = (0usize, 0u32, 0u8);
    let mut open: Vec<(u8, u32)> = Vec::new();
    let mut notes = Vec::new();
    let mut tempo_usec = None;
    let mut ended = false;
    while pos < track.len() {
        now += var_len(track, &mut pos);
        if track[pos] & 0x80 != 0 {
            status = track[pos];
            pos += 1;
        }
        match status {
            0xff => {
                let kind = track[pos];
                pos += 1;
                let n = var_len(track, &mut pos) as usize;
                if kind == 0x51 {
                    tempo_usec = Some(u32::from_be_bytes([0, track[pos], track[pos + 1], track[pos + 2]]));
                }
                if kind == 0x2f {
                    ended = true;
                }
                pos += n;
            }
            s if s & 0xf0 == 0x90 && track[pos + 1] > 0 => {
                open.push((track[pos], now));
                pos += 2;
            }
            s if s & 0xf0 == 0x80 || s & 0xf0 == 0x90 => {
                let key = track[pos];
                let i = open.iter().position(|&(k, _)| k == key).expect("note-off without note-on");
                let (_, start) = open.remove(i);
                notes.push((key, now - start));
                pos += 2;
            }
            other => panic!("unexpected status {other:#x}"),
        }
    }
    assert!(ended && open.is_empty());
    Parsed { division, tempo_usec, notes }
}
