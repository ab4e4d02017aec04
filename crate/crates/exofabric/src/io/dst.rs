//! Tajima DST stitch files.
//!
//! A 512-byte text header is followed by 3-byte movement records. Each record
//! moves the needle by `(dx, dy)` in 0.1 mm units, each axis written as five
//! balanced-ternary digits of weight 1, 3, 9, 27 and 81, so a single record
//! reaches ±121 units. The file ends with `00 00 F3`.
//!
//! The writer starts at the origin, quantizes every absolute position to the
//! 0.1 mm grid (half away from zero) and splits longer moves into chains of
//! jump records. [`expand_plan`] returns the plan the reader will see.

use std::fmt;

use exofabric_core::geometry::{Bounds, Point2, PointKind, StitchPlan, StitchPoint};
use thiserror::Error;

pub const HEADER_LEN: usize = 512;
pub const RECORD_LEN: usize = 3;
/// Largest per-record move on either axis, in file units.
pub const MAX_DELTA: i32 = 121;
pub const UNITS_PER_MM: f64 = 10.0;
pub const MAX_LABEL_LEN: usize = 16;
/// Largest absolute coordinate, in file units.
pub const MAX_COORDINATE: i64 = 32767;
pub const END_RECORD: [u8; 3] = [0x00, 0x00, 0xF3];

const JUMP_BIT: u8 = 0x80;
const COLOR_CHANGE_BIT: u8 = 0x40;
const CONTROL_BITS: u8 = 0x03;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DstError {
    #[error("design name is {0} characters; DST labels hold at most 16")]
    NameTooLong(usize),
    #[error("design name must be printable ASCII")]
    InvalidName,
    #[error("coordinate ({x_mm} mm, {y_mm} mm) is outside the ±3276.7 mm DST range")]
    CoordinateOverflow { x_mm: f64, y_mm: f64 },
    #[error("non-finite coordinate in plan")]
    NonFinite,
    #[error("bad header: {0}")]
    BadHeader(String),
    #[error("bad record at byte {offset}: {message}")]
    BadRecord { offset: usize, message: String },
}

#[derive(Debug, Clone, PartialEq)]
pub enum DstWarning {
    /// A header extent field disagrees with the decoded path.
    ExtentMismatch { field: &'static str, header: i32, computed: i32 },
    StitchCountMismatch { header: u32, records: u32 },
}

impl fmt::Display for DstWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DstWarning::ExtentMismatch { field, header, computed } => {
                write!(f, "header {field} is {header} but the records give {computed}")
            }
            DstWarning::StitchCountMismatch { header, records } => {
                write!(f, "header ST is {header} but the file has {records} records")
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecordKind {
    Stitch,
    Jump,
}

/// One movement in file units.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Record {
    pub dx: i32,
    pub dy: i32,
    pub kind: RecordKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DstHeader {
    pub label: String,
    pub stitch_count: u32,
    pub color_changes: u32,
    pub plus_x: i32,
    pub minus_x: i32,
    pub plus_y: i32,
    pub minus_y: i32,
    pub ax: i32,
    pub ay: i32,
    pub mx: i32,
    pub my: i32,
    pub pd: String,
}

impl DstHeader {
    /// Header describing `records` as written from the origin.
    pub fn for_records(label: &str, records: &[Record]) -> DstHeader {
        let (mut x, mut y) = (0i64, 0i64);
        let (mut min_x, mut max_x, mut min_y, mut max_y) = (0i64, 0i64, 0i64, 0i64);
        for r in records {
            x += i64::from(r.dx);
            y += i64::from(r.dy);
            min_x = min_x.min(x);
            max_x = max_x.max(x);
            min_y = min_y.min(y);
            max_y = max_y.max(y);
        }
        DstHeader {
            label: label.to_string(),
            stitch_count: u32::try_from(records.len()).unwrap_or(u32::MAX),
            color_changes: 0,
            plus_x: saturate(max_x),
            minus_x: saturate(-min_x),
            plus_y: saturate(max_y),
            minus_y: saturate(-min_y),
            ax: saturate(x),
            ay: saturate(y),
            mx: 0,
            my: 0,
            pd: "******".to_string(),
        }
    }

    pub fn to_bytes(&self) -> [u8; HEADER_LEN] {
        let signed = |v: i32| format!("{}{:05}", if v < 0 { '-' } else { '+' }, v.unsigned_abs());
        let text = format!(
            "LA:{:<16}\rST:{:07}\rCO:{:03}\r+X:{:05}\r-X:{:05}\r+Y:{:05}\r-Y:{:05}\rAX:{}\rAY:{}\rMX:{}\rMY:{}\rPD:{}\r",
            self.label,
            self.stitch_count,
            self.color_changes,
            self.plus_x,
            self.minus_x,
            self.plus_y,
            self.minus_y,
            signed(self.ax),
            signed(self.ay),
            signed(self.mx),
            signed(self.my),
            self.pd
        );
        let mut out = [b' '; HEADER_LEN];
        out[..text.len()].copy_from_slice(text.as_bytes());
        out[text.len()] = 0x1A;
        out
    }

    pub fn parse(bytes: &[u8]) -> Result<DstHeader, DstError> {
        if bytes.len() < HEADER_LEN {
            return Err(DstError::BadHeader(format!("file is {} bytes, shorter than the 512-byte header", bytes.len())));
        }
        let head = &bytes[..HEADER_LEN];
        let end = head.iter().position(|&b| b == 0x1A).unwrap_or(HEADER_LEN);
        let mut header = DstHeader::default();
        let mut seen = [false; 7];
        for field in head[..end].split(|&b| b == b'\r') {
            if field.iter().all(|&b| b == b' ' || b == b'\n' || b == 0) {
                continue;
            }
            if field.len() < 3 || field[2] != b':' {
                return Err(DstError::BadHeader(format!("malformed field {:?}", String::from_utf8_lossy(field))));
            }
            let key = &field[..2];
            let value = std::str::from_utf8(&field[3..])
                .map_err(|_| DstError::BadHeader("header field is not ASCII".into()))?;
            let unsigned = |name: &str| -> Result<i32, DstError> {
                let v = value.trim();
                if v.is_empty() || !v.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(DstError::BadHeader(format!("{name} is not a number: {v:?}")));
                }
                v.parse().map_err(|_| DstError::BadHeader(format!("{name} is out of range: {v:?}")))
            };
            let signed = |name: &str| -> Result<i32, DstError> {
                let v = value.trim();
                let (sign, digits) = match v.as_bytes().first() {
                    Some(b'+') => (1, &v[1..]),
                    Some(b'-') => (-1, &v[1..]),
                    _ => (1, v),
                };
                if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(DstError::BadHeader(format!("{name} is not a number: {v:?}")));
                }
                digits
                    .parse::<i32>()
                    .map(|d| sign * d)
                    .map_err(|_| DstError::BadHeader(format!("{name} is out of range: {v:?}")))
            };
            match key {
                b"LA" => {
                    header.label = value.trim_end().to_string();
                    seen[0] = true;
                }
                b"ST" => {
                    header.stitch_count = unsigned("ST")? as u32;
                    seen[1] = true;
                }
                b"CO" => {
                    header.color_changes = unsigned("CO")? as u32;
                    seen[2] = true;
                }
                b"+X" => {
                    header.plus_x = unsigned("+X")?;
                    seen[3] = true;
                }
                b"-X" => {
                    header.minus_x = unsigned("-X")?;
                    seen[4] = true;
                }
                b"+Y" => {
                    header.plus_y = unsigned("+Y")?;
                    seen[5] = true;
                }
                b"-Y" => {
                    header.minus_y = unsigned("-Y")?;
                    seen[6] = true;
                }
                b"AX" => header.ax = signed("AX")?,
                b"AY" => header.ay = signed("AY")?,
                b"MX" => header.mx = signed("MX")?,
                b"MY" => header.my = signed("MY")?,
                b"PD" => header.pd = value.to_string(),
                // other fields are proprietary extensions
                _ => {}
            }
        }
        const NAMES: [&str; 7] = ["LA", "ST", "CO", "+X", "-X", "+Y", "-Y"];
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(DstError::BadHeader(format!("missing {} field", NAMES[i])));
        }
        Ok(header)
    }
}

fn saturate(v: i64) -> i32 {
    v.clamp(i64::from(i32::MIN), i64::from(i32::MAX)) as i32
}

/// Balanced-ternary digits of `v` for weights 1, 3, 9, 27, 81.
fn ternary(mut v: i32) -> [i8; 5] {
    let mut d = [0i8; 5];
    for digit in &mut d {
        let mut r = v % 3;
        if r == 2 {
            r = -1;
        } else if r == -2 {
            r = 1;
        }
        *digit = r as i8;
        v = (v - r) / 3;
    }
    d
}

/// `(byte, plus bit, minus bit)` for each ternary weight, per axis.
const X_BITS: [(usize, u8, u8); 5] = [(0, 0x01, 0x02), (1, 0x01, 0x02), (0, 0x04, 0x08), (1, 0x04, 0x08), (2, 0x04, 0x08)];
const Y_BITS: [(usize, u8, u8); 5] = [(0, 0x80, 0x40), (1, 0x80, 0x40), (0, 0x20, 0x10), (1, 0x20, 0x10), (2, 0x20, 0x10)];

/// Encodes one move. Panics if either component is outside ±121.
pub fn encode_record(dx: i32, dy: i32, kind: RecordKind) -> [u8; 3] {
    assert!(dx.abs() <= MAX_DELTA && dy.abs() <= MAX_DELTA, "record move ({dx}, {dy}) exceeds ±121");
    let mut b = [0u8, 0u8, CONTROL_BITS];
    for (digits, bits) in [(ternary(dx), &X_BITS), (ternary(dy), &Y_BITS)] {
        for (d, &(byte, plus, minus)) in digits.iter().zip(bits.iter()) {
            match d {
                1 => b[byte] |= plus,
                -1 => b[byte] |= minus,
                _ => {}
            }
        }
    }
    if kind == RecordKind::Jump {
        b[2] |= JUMP_BIT;
    }
    b
}

/// Decodes one movement record. `offset` is only used in errors.
pub fn decode_record(b: [u8; 3], offset: usize) -> Result<Record, DstError> {
    let bad = |message: &str| DstError::BadRecord { offset, message: message.to_string() };
    if b[2] & CONTROL_BITS != CONTROL_BITS {
        return Err(bad("control bits 0 and 1 of byte 2 are not set"));
    }
    if b[2] & COLOR_CHANGE_BIT != 0 {
        return Err(bad("color-change records are not supported"));
    }
    let weights = [1, 3, 9, 27, 81];
    let axis = |bits: &[(usize, u8, u8); 5]| -> Result<i32, DstError> {
        let mut v = 0;
        for (&(byte, plus, minus), w) in bits.iter().zip(weights) {
            let (p, m) = (b[byte] & plus != 0, b[byte] & minus != 0);
            if p && m {
                return Err(bad("both signs set for one weight"));
            }
            v += w * (i32::from(p) - i32::from(m));
        }
        Ok(v)
    };
    let dx = axis(&X_BITS)?;
    let dy = axis(&Y_BITS)?;
    let kind = if b[2] & JUMP_BIT != 0 { RecordKind::Jump } else { RecordKind::Stitch };
    Ok(Record { dx, dy, kind })
}

fn quantize(p: Point2) -> Result<(i64, i64), DstError> {
    if !p.x.is_finite() || !p.y.is_finite() {
        return Err(DstError::NonFinite);
    }
    // `round` takes halves away from zero
    let (x, y) = ((p.x * UNITS_PER_MM).round(), (p.y * UNITS_PER_MM).round());
    if x.abs() > MAX_COORDINATE as f64 || y.abs() > MAX_COORDINATE as f64 {
        return Err(DstError::CoordinateOverflow { x_mm: p.x, y_mm: p.y });
    }
    Ok((x as i64, y as i64))
}

/// Movement records for `plan`, starting from the origin. Moves longer than
/// one record become greedy ±121 jump chains ending in the point's own kind.
pub fn plan_records(plan: &StitchPlan) -> Result<Vec<Record>, DstError> {
    let mut records = Vec::with_capacity(plan.len());
    let (mut cx, mut cy) = (0i64, 0i64);
    for p in &plan.points {
        let (x, y) = quantize(p.at)?;
        let (mut dx, mut dy) = (x - cx, y - cy);
        let max = i64::from(MAX_DELTA);
        while dx.abs() > max || dy.abs() > max {
            let (sx, sy) = (dx.clamp(-max, max), dy.clamp(-max, max));
            records.push(Record { dx: sx as i32, dy: sy as i32, kind: RecordKind::Jump });
            dx -= sx;
            dy -= sy;
        }
        let kind = match p.kind {
            PointKind::Stitch => RecordKind::Stitch,
            PointKind::Jump => RecordKind::Jump,
        };
        records.push(Record { dx: dx as i32, dy: dy as i32, kind });
        (cx, cy) = (x, y);
    }
    Ok(records)
}

fn records_to_plan(records: &[Record]) -> StitchPlan {
    let (mut x, mut y) = (0i64, 0i64);
    let points = records
        .iter()
        .map(|r| {
            x += i64::from(r.dx);
            y += i64::from(r.dy);
            let at = Point2::new(x as f64 / UNITS_PER_MM, y as f64 / UNITS_PER_MM);
            match r.kind {
                RecordKind::Stitch => StitchPoint::stitch(at),
                RecordKind::Jump => StitchPoint::jump(at),
            }
        })
        .collect();
    StitchPlan::from_points(points)
}

/// The plan `read_dst(write_dst(plan))` decodes to: positions snapped to the
/// 0.1 mm grid, with the intermediate points of split moves inserted as jumps.
pub fn expand_plan(plan: &StitchPlan) -> Result<StitchPlan, DstError> {
    Ok(records_to_plan(&plan_records(plan)?))
}

fn check_label(name: &str) -> Result<(), DstError> {
    let chars = name.chars().count();
    if chars > MAX_LABEL_LEN {
        return Err(DstError::NameTooLong(chars));
    }
    if !name.bytes().all(|b| (0x20..0x7F).contains(&b)) {
        return Err(DstError::InvalidName);
    }
    Ok(())
}

/// Header plus record stream, ready to serialize.
#[derive(Debug, Clone, PartialEq)]
pub struct DstDocument {
    pub header: DstHeader,
    pub records: Vec<Record>,
}

impl DstDocument {
    pub fn from_plan(plan: &StitchPlan, name: &str) -> Result<DstDocument, DstError> {
        check_label(name)?;
        let records = plan_records(plan)?;
        Ok(DstDocument { header: DstHeader::for_records(name, &records), records })
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(HEADER_LEN + RECORD_LEN * (self.records.len() + 1));
        out.extend_from_slice(&self.header.to_bytes());
        for r in &self.records {
            out.extend_from_slice(&encode_record(r.dx, r.dy, r.kind));
        }
        out.extend_from_slice(&END_RECORD);
        out
    }
}

pub fn write_dst(plan: &StitchPlan, name: &str) -> Result<Vec<u8>, DstError> {
    Ok(DstDocument::from_plan(plan, name)?.to_bytes())
}

/// A decoded file.
#[derive(Debug, Clone, PartialEq)]
pub struct DstRead {
    pub header: DstHeader,
    pub records: Vec<Record>,
    pub plan: StitchPlan,
    pub warnings: Vec<DstWarning>,
}

impl DstRead {
    /// Extent of the decoded path in millimetres, origin included.
    pub fn bounds(&self) -> Bounds {
        Bounds::of(std::iter::once(Point2::ORIGIN).chain(self.plan.points.iter().map(|p| p.at)))
            .expect("origin is always present")
    }
}

pub fn read_dst(bytes: &[u8]) -> Result<DstRead, DstError> {
    let header = DstHeader::parse(bytes)?;
    let mut records = Vec::new();
    let mut offset = HEADER_LEN;
    loop {
        let Some(chunk) = bytes.get(offset..offset + RECORD_LEN) else {
            return Err(DstError::BadRecord { offset, message: "file ends without an end record".into() });
        };
        let b = [chunk[0], chunk[1], chunk[2]];
        if b == END_RECORD {
            break;
        }
        records.push(decode_record(b, offset)?);
        offset += RECORD_LEN;
    }

    let mut warnings = Vec::new();
    if header.stitch_count as usize != records.len() {
        warnings.push(DstWarning::StitchCountMismatch { header: header.stitch_count, records: records.len() as u32 });
    }
    let computed = DstHeader::for_records(&header.label, &records);
    for (field, h, c) in [
        ("+X", header.plus_x, computed.plus_x),
        ("-X", header.minus_x, computed.minus_x),
        ("+Y", header.plus_y, computed.plus_y),
        ("-Y", header.minus_y, computed.minus_y),
    ] {
        if h != c {
            warnings.push(DstWarning::ExtentMismatch { field, header: h, computed: c });
        }
    }
    let plan = records_to_plan(&records);
    Ok(DstRead { header, records, plan, warnings })
}
