"""Framing round-trips, classified decode failures, stream resync."""
import random
import struct

import pytest
from hypothesis import given, settings, strategies as st

from patrolbot.protocol import (
    AlarmSignal,
    BodyError,
    DecodeError,
    EncodeError,
    FrameReader,
    OperatorCommand,
    TelemetryFrame,
    TruncatedFrame,
    UnknownTag,
    UnknownVersion,
    VideoFrameStub,
    cadence_marks,
    decode,
    encode,
    video_payload,
)

finite = st.floats(allow_nan=False, allow_infinity=False, width=64)
sonar = st.floats(4.0, 255.0)
name = st.from_regex(r"[A-Za-z0-9_.:-]{1,16}", fullmatch=True)

telemetry_frames = st.builds(
    TelemetryFrame,
    seq=st.integers(0, 2**40),
    t_sim=finite, x=finite, y=finite, heading=finite,
    sonar_left=sonar, sonar_front=sonar, sonar_right=sonar,
    hms_left=st.booleans(), hms_right=st.booleans(),
    battery_remaining=finite,
    mode=st.sampled_from(["FOLLOW", "AVOID", "ALARM", "DONE", "BATTERY_OUT",
                          "MANUAL"]),
    odometer=finite,
)
video_frames = st.builds(
    VideoFrameStub,
    seq=st.integers(0, 2**40), t_sim=finite,
    width=st.just(353), height=st.just(288),
    payload=st.binary(max_size=2048),
)
alarm_signals = st.builds(
    AlarmSignal,
    t_sim=finite, cause=st.sampled_from(["HMS_LEFT", "HMS_RIGHT"]),
    x=finite, y=finite, heading=finite,
)
operator_commands = st.one_of(
    st.builds(OperatorCommand,
              kind=st.sampled_from(["START_PATROL", "STOP", "ACK_ALARM"]),
              value=st.none(), issued_at=finite, operator_id=name),
    st.builds(OperatorCommand,
              kind=st.sampled_from(["MANUAL_TURN", "MANUAL_FORWARD",
                                    "CAMERA_PAN"]),
              value=finite, issued_at=finite, operator_id=name),
)
any_message = st.one_of(telemetry_frames, video_frames, alarm_signals,
                        operator_commands)


def make_telemetry(seq=0, **kw):
    base = dict(seq=seq, t_sim=1.5, x=10.0, y=20.0, heading=90.0,
                sonar_left=30.0, sonar_front=255.0, sonar_right=255.0,
                hms_left=False, hms_right=False, battery_remaining=5000.0,
                mode="FOLLOW", odometer=123.4)
    base.update(kw)
    return TelemetryFrame(**base)


class TestRoundTrip:
    @settings(max_examples=250)
    @given(any_message)
    def test_decode_encode_identity(self, msg):
        assert decode(encode(msg)) == msg

    def test_alarm_example(self):
        sig = AlarmSignal(t_sim=120.5, cause="HMS_LEFT", x=1.0, y=2.0,
                          heading=45.0)
        assert decode(encode(sig)) == sig

    def test_minimal_telemetry(self):
        msg = make_telemetry(seq=0)
        assert decode(encode(msg)) == msg

    def test_float_values_roundtrip_exactly(self):
        msg = make_telemetry(t_sim=0.1 + 0.2, odometer=1e-17)
        out = decode(encode(msg))
        assert out.t_sim == msg.t_sim and out.odometer == msg.odometer


class TestEncodeErrors:
    def test_oversize_payload(self):
        big = VideoFrameStub(seq=0, t_sim=0.0, width=353, height=288,
                             payload=b"x" * (1 << 20))
        with pytest.raises(EncodeError):
            encode(big)

    def test_wrong_video_dimensions(self):
        with pytest.raises(EncodeError):
            encode(VideoFrameStub(seq=0, t_sim=0.0, width=100, height=100,
                                  payload=b""))

    def test_sonar_clamp_enforced(self):
        with pytest.raises(EncodeError):
            encode(make_telemetry(sonar_left=300.0))

    def test_unknown_command_kind(self):
        with pytest.raises(EncodeError):
            encode(OperatorCommand("DANCE", None, 0.0, "op"))

    def test_valued_command_requires_value(self):
        with pytest.raises(EncodeError):
            encode(OperatorCommand("MANUAL_TURN", None, 0.0, "op"))

    def test_not_a_message(self):
        with pytest.raises(EncodeError):
            encode({"seq": 1})


class TestDecodeErrors:
    def test_truncated_header(self):
        with pytest.raises(TruncatedFrame):
            decode(b"\x00\x00")

    def test_truncated_body(self):
        frame = encode(make_telemetry())
        with pytest.raises(TruncatedFrame):
            decode(frame[:-5])

    def test_unknown_version(self):
        frame = bytearray(encode(make_telemetry()))
        frame[4] = 99
        with pytest.raises(UnknownVersion):
            decode(bytes(frame))

    def test_unknown_tag(self):
        frame = bytearray(encode(make_telemetry()))
        frame[5] = 42
        with pytest.raises(UnknownTag):
            decode(bytes(frame))

    def test_body_validation_failure(self):
        frame = encode(make_telemetry())
        corrupted = frame[:6] + frame[6:].replace(b"seq=0", b"seq=no")
        with pytest.raises(BodyError):
            decode(corrupted)

    def test_trailing_bytes_rejected(self):
        with pytest.raises(BodyError):
            decode(encode(make_telemetry()) + b"junk")

    def test_insane_length_field(self):
        with pytest.raises(BodyError):
            decode(struct.pack(">I", 1 << 30) + b"\x01\x01")

    @settings(max_examples=300)
    @given(st.binary(max_size=80))
    def test_total_over_arbitrary_bytes(self, blob):
        try:
            decode(blob)
        except DecodeError:
            pass

    def test_seeded_fuzz_corpus(self):
        rng = random.Random(0xF00D)
        for _ in range(10_000):
            blob = rng.randbytes(rng.randrange(0, 64))
            try:
                decode(blob)
            except DecodeError:
                pass


class TestFrameReader:
    def test_stream_of_messages(self):
        msgs = [make_telemetry(seq=i) for i in range(5)]
        stream = b"".join(encode(m) for m in msgs)
        reader = FrameReader()
        # feed in awkward chunk sizes
        out = []
        for i in range(0, len(stream), 7):
            out.extend(reader.feed(stream[i : i + 7]))
        assert out == msgs

    def test_bad_frame_resyncs_at_boundary(self):
        good = make_telemetry(seq=1)
        bad = bytearray(encode(make_telemetry(seq=0)))
        bad[4] = 9  # unknown version, length field intact
        reader = FrameReader()
        out = reader.feed(bytes(bad) + encode(good))
        assert isinstance(out[0], UnknownVersion)
        assert out[1] == good

    def test_garbage_length_skips_header_and_recovers(self):
        garbage = struct.pack(">I", 0xFFFFFFFF)
        good = make_telemetry(seq=2)
        reader = FrameReader()
        out = reader.feed(garbage + encode(good))
        assert isinstance(out[0], BodyError)
        assert out[-1] == good

    def test_partial_frame_stays_buffered(self):
        frame = encode(make_telemetry())
        reader = FrameReader()
        assert reader.feed(frame[:10]) == []
        assert reader.pending == 10
        assert reader.feed(frame[10:]) == [make_telemetry()]
        assert reader.pending == 0


class TestCadence:
    def test_ten_hz_marks(self):
        marks = cadence_marks(0.0, 1.0, 10.0)
        assert len(marks) == 10
        assert marks[0] == pytest.approx(0.1)
        assert marks[-1] == pytest.approx(1.0)

    def test_no_marks_when_time_stalls(self):
        assert cadence_marks(5.0, 5.0, 10.0) == []

    def test_marks_partition_across_ticks(self):
        # however the interval is sliced, the same marks come out
        whole = cadence_marks(0.0, 3.0, 15.0)
        t, parts = 0.0, []
        for dt in (0.05, 0.4, 1.0, 0.25, 1.3):
            parts.extend(cadence_marks(t, t + dt, 15.0))
            t += dt
        assert parts == whole

    def test_video_payload_deterministic(self):
        assert video_payload(7) == video_payload(7)
        assert video_payload(7) != video_payload(8)
