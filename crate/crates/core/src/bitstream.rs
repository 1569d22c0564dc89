//! Bit packing of frame parameters and the `.cpsy` container.
//!
//! Bits are packed MSB-first. Each frame starts on a byte boundary and is
//! zero-padded to [`Mode::frame_bytes`]. A container is a 16-byte header
//! followed by `frame_count` frames:
//!
//! | offset | size | field                                      |
//! |-------:|-----:|--------------------------------------------|
//! | 0      | 4    | magic `CPSY`                               |
//! | 4      | 1    | version (1)                                |
//! | 5      | 1    | mode (0 low, 1 mid, 2 high)                |
//! | 6      | 1    | weighting (0 gamma, 1 psy), informational  |
//! | 7      | 1    | complexity (0 full, 1..3 C1..C3), informational |
//! | 8      | 4    | sample rate, little-endian (8000)          |
//! | 12     | 4    | frame count, little-endian                 |

use std::io::{Read, Write};

use crate::celp::{
    FrameParams, LspQuantizer, Mode, SubframeParams, FRAME_GAIN_BITS, GAIN3_BITS, LPC_ORDER,
    PITCH_BITS, PITCH_MIN, SUBFRAMES,
};
use crate::dsp::SAMPLE_RATE;
use crate::error::{Error, Result};
use crate::weighting::ComplexityMode;

pub const MAGIC: [u8; 4] = *b"CPSY";
pub const VERSION: u8 = 1;
pub const HEADER_LEN: usize = 16;

fn check_width(nbits: u32) -> Result<()> {
    if (1..=32).contains(&nbits) {
        Ok(())
    } else {
        Err(Error::invalid(format!("bit width {nbits} outside [1, 32]")))
    }
}

/// Appends bits MSB-first to a growing byte buffer.
#[derive(Debug, Clone, Default)]
pub struct BitWriter {
    bytes: Vec<u8>,
    bit_len: usize,
}

impl BitWriter {
    pub fn new() -> Self {
        Self::default()
    }

    /// Writes the low `nbits` bits of `value`, most significant first.
    pub fn write_bits(&mut self, value: u32, nbits: u32) -> Result<()> {
        check_width(nbits)?;
        if nbits < 32 && value >> nbits != 0 {
            return Err(Error::invalid(format!("{value} does not fit in {nbits} bits")));
        }
        for i in (0..nbits).rev() {
            if self.bit_len.is_multiple_of(8) {
                self.bytes.push(0);
            }
            if (value >> i) & 1 == 1 {
                let last = self.bytes.last_mut().expect("byte pushed above");
                *last |= 0x80 >> (self.bit_len % 8);
            }
            self.bit_len += 1;
        }
        Ok(())
    }

    /// Number of bits written so far.
    pub fn bit_len(&self) -> usize {
        self.bit_len
    }

    /// Pads with zero bits to the next byte boundary.
    pub fn align(&mut self) {
        self.bit_len = self.bytes.len() * 8;
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.bytes
    }
}

/// Reads bits MSB-first from a byte slice.
#[derive(Debug, Clone)]
pub struct BitReader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> BitReader<'a> {
    pub fn new(bytes: &'a [u8]) -> Self {
        Self { bytes, pos: 0 }
    }

    pub fn position(&self) -> usize {
        self.pos
    }

    pub fn remaining(&self) -> usize {
        self.bytes.len() * 8 - self.pos
    }

    pub fn read_bits(&mut self, nbits: u32) -> Result<u32> {
        check_width(nbits)?;
        if nbits as usize > self.remaining() {
            return Err(Error::Truncated(format!(
                "need {nbits} bits at bit {}, {} left",
                self.pos,
                self.remaining()
            )));
        }
        let mut value = 0u32;
        for _ in 0..nbits {
            let bit = (self.bytes[self.pos / 8] >> (7 - self.pos % 8)) & 1;
            value = (value << 1) | bit as u32;
            self.pos += 1;
        }
        Ok(value)
    }

    /// Skips to the next byte boundary.
    pub fn align(&mut self) {
        self.pos = self.pos.div_ceil(8) * 8;
    }
}

/// Appends one frame, byte-aligned, to `w`.
pub fn pack_frame(params: &FrameParams, mode: Mode, w: &mut BitWriter) -> Result<()> {
    params.validate(mode)?;
    for (i, &ix) in params.lsp_indices.iter().enumerate() {
        w.write_bits(ix as u32, LspQuantizer::bits(i))?;
    }
    w.write_bits(params.frame_gain_index as u32, FRAME_GAIN_BITS)?;
    for sf in &params.subframes {
        w.write_bits((sf.pitch as usize - PITCH_MIN) as u32, PITCH_BITS)?;
        w.write_bits(sf.gain3_index as u32, GAIN3_BITS)?;
        let gain_bits = mode.subframe_gain_bits();
        if gain_bits > 0 {
            w.write_bits(sf.subframe_gain_index as u32, gain_bits)?;
        }
        for &ix in &sf.innovation {
            w.write_bits(ix as u32, mode.subvector_bits())?;
        }
    }
    w.align();
    Ok(())
}

/// Reads one byte-aligned frame from `r`.
pub fn unpack_frame(r: &mut BitReader<'_>, mode: Mode) -> Result<FrameParams> {
    let mut lsp_indices = [0u8; LPC_ORDER];
    for (i, ix) in lsp_indices.iter_mut().enumerate() {
        *ix = r.read_bits(LspQuantizer::bits(i))? as u8;
    }
    let frame_gain_index = r.read_bits(FRAME_GAIN_BITS)? as u8;
    let mut subframes = Vec::with_capacity(SUBFRAMES);
    for _ in 0..SUBFRAMES {
        let pitch = (r.read_bits(PITCH_BITS)? as usize + PITCH_MIN) as u16;
        let gain3_index = r.read_bits(GAIN3_BITS)? as u8;
        let gain_bits = mode.subframe_gain_bits();
        let subframe_gain_index = if gain_bits > 0 { r.read_bits(gain_bits)? as u8 } else { 0 };
        let innovation = (0..mode.subvectors())
            .map(|_| r.read_bits(mode.subvector_bits()).map(|v| v as u16))
            .collect::<Result<Vec<_>>>()?;
        subframes.push(SubframeParams {
            pitch,
            gain3_index,
            subframe_gain_index,
            innovation,
        });
    }
    r.align();
    let params = FrameParams {
        lsp_indices,
        frame_gain_index,
        subframes,
    };
    params
        .validate(mode)
        .map_err(|e| Error::UnsupportedFormat(format!("corrupt frame: {e}")))?;
    Ok(params)
}

/// Fixed-size container header.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StreamHeader {
    pub mode: Mode,
    /// `true` when the encoder used psychoacoustic weighting.
    pub psy_weighting: bool,
    pub complexity: ComplexityMode,
    pub sample_rate: u32,
    pub frame_count: u32,
}

fn complexity_id(c: ComplexityMode) -> u8 {
    match c {
        ComplexityMode::Full => 0,
        ComplexityMode::C1 => 1,
        ComplexityMode::C2 => 2,
        ComplexityMode::C3 => 3,
    }
}

fn complexity_from_id(id: u8) -> Result<ComplexityMode> {
    Ok(match id {
        0 => ComplexityMode::Full,
        1 => ComplexityMode::C1,
        2 => ComplexityMode::C2,
        3 => ComplexityMode::C3,
        _ => return Err(Error::UnsupportedFormat(format!("unknown complexity byte {id}"))),
    })
}

impl StreamHeader {
    pub fn new(mode: Mode, psy_weighting: bool, complexity: ComplexityMode, frame_count: u32) -> Self {
        Self {
            mode,
            psy_weighting,
            complexity,
            sample_rate: SAMPLE_RATE,
            frame_count,
        }
    }

    pub fn to_bytes(&self) -> [u8; HEADER_LEN] {
        let mut out = [0u8; HEADER_LEN];
        out[..4].copy_from_slice(&MAGIC);
        out[4] = VERSION;
        out[5] = self.mode.id();
        out[6] = self.psy_weighting as u8;
        out[7] = complexity_id(self.complexity);
        out[8..12].copy_from_slice(&self.sample_rate.to_le_bytes());
        out[12..16].copy_from_slice(&self.frame_count.to_le_bytes());
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < HEADER_LEN {
            return Err(Error::Truncated(format!(
                "header needs {HEADER_LEN} bytes, got {}",
                bytes.len()
            )));
        }
        if bytes[..4] != MAGIC {
            return Err(Error::UnsupportedFormat("bad magic, not a .cpsy stream".into()));
        }
        if bytes[4] != VERSION {
            return Err(Error::UnsupportedFormat(format!("unsupported version {}", bytes[4])));
        }
        let mode = Mode::from_id(bytes[5]).map_err(|e| Error::UnsupportedFormat(e.to_string()))?;
        let psy_weighting = match bytes[6] {
            0 => false,
            1 => true,
            b => return Err(Error::UnsupportedFormat(format!("unknown weighting byte {b}"))),
        };
        let complexity = complexity_from_id(bytes[7])?;
        let sample_rate = u32::from_le_bytes(bytes[8..12].try_into().expect("4 bytes"));
        if sample_rate != SAMPLE_RATE {
            return Err(Error::UnsupportedFormat(format!("sample rate {sample_rate} is not 8000")));
        }
        let frame_count = u32::from_le_bytes(bytes[12..16].try_into().expect("4 bytes"));
        Ok(Self {
            mode,
            psy_weighting,
            complexity,
            sample_rate,
            frame_count,
        })
    }
}

/// A decoded container: header plus frames.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stream {
    pub header: StreamHeader,
    pub frames: Vec<FrameParams>,
}

/// Serializes a whole stream.
pub fn encode_container(header: &StreamHeader, frames: &[FrameParams]) -> Result<Vec<u8>> {
    if header.frame_count as usize != frames.len() {
        return Err(Error::invalid(format!(
            "header announces {} frames, got {}",
            header.frame_count,
            frames.len()
        )));
    }
    let mut w = BitWriter::new();
    for f in frames {
        pack_frame(f, header.mode, &mut w)?;
    }
    let mut out = header.to_bytes().to_vec();
    out.extend(w.into_bytes());
    Ok(out)
}

/// Parses a whole stream. Trailing bytes after the announced frames are an error.
pub fn decode_container(bytes: &[u8]) -> Result<Stream> {
    let header = StreamHeader::from_bytes(bytes)?;
    let body = &bytes[HEADER_LEN..];
    let expected = header.frame_count as usize * header.mode.frame_bytes();
    if body.len() < expected {
        return Err(Error::Truncated(format!(
            "{} frames need {expected} bytes, got {}",
            header.frame_count,
            body.len()
        )));
    }
    if body.len() > expected {
        return Err(Error::UnsupportedFormat(format!(
            "{} trailing bytes after last frame",
            body.len() - expected
        )));
    }
    let mut r = BitReader::new(body);
    let frames = (0..header.frame_count)
        .map(|_| unpack_frame(&mut r, header.mode))
        .collect::<Result<Vec<_>>>()?;
    Ok(Stream { header, frames })
}

pub fn write_container<W: Write>(out: &mut W, header: &StreamHeader, frames: &[FrameParams]) -> Result<()> {
    out.write_all(&encode_container(header, frames)?)?;
    Ok(())
}

pub fn read_container<R: Read>(input: &mut R) -> Result<Stream> {
    let mut bytes = Vec::new();
    input.read_to_end(&mut bytes)?;
    decode_container(&bytes)
}
