use celpsy::bitstream::{
    decode_container, encode_container, pack_frame, unpack_frame, BitReader, BitWriter,
    StreamHeader, HEADER_LEN,
};
use celpsy::celp::{decode_stream, encode_signal, EncoderConfig, FrameParams, LspQuantizer, Mode, SubframeParams};
use celpsy::weighting::{ComplexityMode, WeightingMode};
use celpsy::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const MODES: [Mode; 3] = [Mode::Low, Mode::Mid, Mode::High];

fn random_frame(rng: &mut ChaCha8Rng, mode: Mode) -> FrameParams {
    FrameParams {
        lsp_indices: std::array::from_fn(|i| rng.gen_range(0..LspQuantizer::levels(i)) as u8),
        frame_gain_index: rng.gen_range(0..32),
        subframes: (0..4)
            .map(|_| SubframeParams {
                pitch: rng.gen_range(17..=144),
                gain3_index: rng.gen_range(0..32),
                subframe_gain_index: rng.gen_range(0..1 << mode.subframe_gain_bits()),
                innovation: (0..mode.subvectors())
                    .map(|_| rng.gen_range(0..1u32 << mode.subvector_bits()) as u16)
                    .collect(),
            })
            .collect(),
    }
}

#[test]
fn random_bit_fields_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(51);
    let fields: Vec<(u32, u32)> = (0..10_000)
        .map(|_| {
            let n = rng.gen_range(1..=32);
            let v = if n == 32 { rng.gen() } else { rng.gen_range(0..1u32 << n) };
            (v, n)
        })
        .collect();
    let mut w = BitWriter::new();
    for &(v, n) in &fields {
        w.write_bits(v, n).unwrap();
    }
    let total: usize = fields.iter().map(|&(_, n)| n as usize).sum();
    assert_eq!(w.bit_len(), total);
    let bytes = w.into_bytes();
    assert_eq!(bytes.len(), total.div_ceil(8));
    let mut r = BitReader::new(&bytes);
    for &(v, n) in &fields {
        assert_eq!(r.read_bits(n).unwrap(), v);
    }
}

#[test]
fn random_frames_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(52);
    for mode in MODES {
        let frames: Vec<FrameParams> = (0..1000).map(|_| random_frame(&mut rng, mode)).collect();
        let mut w = BitWriter::new();
        for f in &frames {
            let before = w.bit_len();
            pack_frame(f, mode, &mut w).unwrap();
            assert_eq!(w.bit_len() - before, mode.frame_bytes() * 8);
        }
        let bytes = w.into_bytes();
        let mut r = BitReader::new(&bytes);
        for f in &frames {
            assert_eq!(&unpack_frame(&mut r, mode).unwrap(), f);
        }
        assert_eq!(r.remaining(), 0);
    }
}

#[test]
fn field_widths_add_up() {
    assert_eq!(Mode::Low.frame_bits(), 30 + 5 + 4 * (7 + 5 + 1 + 2 * 5));
    assert_eq!(Mode::Mid.frame_bits(), 30 + 5 + 4 * (7 + 5 + 2 + 4 * 6));
    assert_eq!(Mode::High.frame_bits(), 30 + 5 + 4 * (7 + 5 + 3 + 8 * 8));
}

#[test]
fn invalid_frames_are_rejected_at_pack_time() {
    let mut rng = ChaCha8Rng::seed_from_u64(53);
    let good = random_frame(&mut rng, Mode::Low);
    let mut w = BitWriter::new();
    for pitch in [16, 145] {
        let mut bad = good.clone();
        bad.subframes[2].pitch = pitch;
        assert!(matches!(pack_frame(&bad, Mode::Low, &mut w), Err(Error::InvalidArgument(_))));
    }
    let mut bad = good.clone();
    bad.lsp_indices[9] = 4;
    assert!(pack_frame(&bad, Mode::Low, &mut w).is_err());
    let mut bad = good.clone();
    bad.subframes[0].subframe_gain_index = 2;
    assert!(pack_frame(&bad, Mode::Low, &mut w).is_err());
    assert!(pack_frame(&good, Mode::High, &mut w).is_err());
    assert_eq!(w.bit_len(), 0);
}

#[test]
fn truncated_and_padded_containers_fail() {
    let mut rng = ChaCha8Rng::seed_from_u64(54);
    let frames: Vec<FrameParams> = (0..5).map(|_| random_frame(&mut rng, Mode::Mid)).collect();
    let h = StreamHeader::new(Mode::Mid, false, ComplexityMode::Full, 5);
    let bytes = encode_container(&h, &frames).unwrap();
    assert_eq!(bytes.len(), HEADER_LEN + 5 * Mode::Mid.frame_bytes());
    assert!(matches!(decode_container(&bytes[..bytes.len() - 1]), Err(Error::Truncated(_))));
    assert!(matches!(decode_container(&bytes[..3]), Err(Error::Truncated(_))));
    let mut longer = bytes.clone();
    longer.push(0);
    assert!(matches!(decode_container(&longer), Err(Error::UnsupportedFormat(_))));
    let wrong_count = StreamHeader::new(Mode::Mid, false, ComplexityMode::Full, 4);
    assert!(encode_container(&wrong_count, &frames).is_err());
    let mut r = BitReader::new(&bytes[HEADER_LEN..HEADER_LEN + 10]);
    assert!(matches!(unpack_frame(&mut r, Mode::Mid), Err(Error::Truncated(_))));
}

#[test]
fn decoder_ignores_informational_header_bytes() {
    let x = celpsy::harness::corpus::speech_like(55, 0.5);
    let cfg = EncoderConfig::new(Mode::High, WeightingMode::Psy, ComplexityMode::C2);
    let frames = encode_signal(&x, &cfg).unwrap();
    let h = StreamHeader::new(cfg.mode, true, cfg.complexity, frames.len() as u32);
    let bytes = encode_container(&h, &frames).unwrap();
    assert_eq!(bytes, encode_container(&h, &encode_signal(&x, &cfg).unwrap()).unwrap());
    let reference = {
        let s = decode_container(&bytes).unwrap();
        decode_stream(&s.frames, s.header.mode).unwrap()
    };
    for (weighting, complexity) in [(0u8, 0u8), (0, 3), (1, 1)] {
        let mut flipped = bytes.clone();
        flipped[6] = weighting;
        flipped[7] = complexity;
        let s = decode_container(&flipped).unwrap();
        assert_eq!(decode_stream(&s.frames, s.header.mode).unwrap(), reference);
    }
    let mut bad = bytes.clone();
    bad[5] = 3;
    assert!(matches!(decode_container(&bad), Err(Error::UnsupportedFormat(_))));
}
