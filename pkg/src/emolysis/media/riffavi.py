"""Minimal RIFF/AVI container support: uncompressed BGR24 video + PCM16 audio.

This exists because the execution environment offers no audio-capable
media library (cv2 exposes no audio API on this platform and there is
no ffmpeg binary), while the pipeline needs frame-accurate video and
sample-accurate audio from one shared clock. The writer produces a
standard interleaved AVI (BI_RGB bottom-up video, 16-bit mono PCM)
that stock players and ffmpeg also accept; the reader walks the RIFF
tree directly and gives random access to frames and sample ranges.

Only the subset needed for uncompressed fixtures lives here; anything
else is delegated to OpenCV by the ingest layer.
"""

import struct
from dataclasses import dataclass
from typing import BinaryIO, List, Optional, Tuple

import numpy as np

from ..errors import IngestError

_AVIF_HASINDEX = 0x00000010
_AVIIF_KEYFRAME = 0x00000010


class UnsupportedCodecError(IngestError):
    """Structurally valid AVI whose video codec this parser does not handle."""


def _pad16(samples: np.ndarray) -> bytes:
    data = samples.astype("<i2", copy=False).tobytes()
    return data + (b"\x00" if len(data) % 2 else b"")


def _row_stride(width: int) -> int:
    return (width * 3 + 3) & ~3


class RawAviWriter:
    """Streaming writer for an interleaved uncompressed AVI.

    Frames are HxWx3 uint8 RGB arrays; audio is appended as int16 mono
    samples and interleaved per video frame. Sizes are patched on close.
    """

    def __init__(
        self,
        path: str,
        width: int,
        height: int,
        fps: float,
        sample_rate: Optional[int] = None,
    ):
        self.width = width
        self.height = height
        self.fps = fps
        self.sample_rate = sample_rate
        self._stride = _row_stride(width)
        self._frames_written = 0
        self._audio_written = 0
        self._audio_pending = np.empty(0, dtype=np.int16)
        self._index: List[Tuple[bytes, int, int]] = []  # (ckid, offset, size)
        self._fh: BinaryIO = open(path, "wb")
        self._write_headers()

    # -- header layout -------------------------------------------------

    def _write_headers(self):
        f = self._fh
        f.write(b"RIFF")
        self._riff_size_pos = f.tell()
        f.write(struct.pack("<I", 0))
        f.write(b"AVI ")

        # LIST hdrl
        f.write(b"LIST")
        hdrl_size_pos = f.tell()
        f.write(struct.pack("<I", 0))
        f.write(b"hdrl")

        f.write(b"avih" + struct.pack("<I", 56))
        self._avih_pos = f.tell()
        f.write(self._avih(0))

        self._write_video_strl()
        if self.sample_rate is not None:
            self._write_audio_strl()

        hdrl_end = f.tell()
        f.seek(hdrl_size_pos)
        f.write(struct.pack("<I", hdrl_end - hdrl_size_pos - 4))
        f.seek(hdrl_end)

        # LIST movi
        f.write(b"LIST")
        self._movi_size_pos = f.tell()
        f.write(struct.pack("<I", 0))
        f.write(b"movi")
        self._movi_start = self._movi_size_pos + 4

    def _avih(self, total_frames: int) -> bytes:
        frame_bytes = self._stride * self.height
        streams = 1 if self.sample_rate is None else 2
        return struct.pack(
            "<10I4x12x",
            round(1_000_000 / self.fps),
            int(frame_bytes * self.fps),
            0,
            _AVIF_HASINDEX,
            total_frames,
            0,
            streams,
            frame_bytes,
            self.width,
            self.height,
        )

    def _strh(self, fcc_type: bytes, handler: bytes, scale: int, rate: int,
              length: int, buf_size: int, sample_size: int) -> bytes:
        return (
            b"strh"
            + struct.pack("<I", 56)
            + fcc_type
            + handler
            + struct.pack(
                "<IHHIIIIIIiI4h",
                0, 0, 0, 0, scale, rate, 0, length, buf_size, -1, sample_size,
                0, 0, self.width, self.height,
            )
        )

    def _write_video_strl(self):
        f = self._fh
        frame_bytes = self._stride * self.height
        # fps as a rational: scale/rate with 1e6 denominator keeps
        # non-integer rates exact enough for probe round-trips.
        scale, rate = 1_000_000, round(self.fps * 1_000_000)
        f.write(b"LIST" + struct.pack("<I", 0) + b"strl")
        size_pos = f.tell() - 8
        self._vids_strh_pos = f.tell() + 8
        f.write(self._strh(b"vids", b"DIB ", scale, rate, 0, frame_bytes, 0))
        f.write(
            b"strf"
            + struct.pack("<I", 40)
            + struct.pack(
                "<IiiHHIIiiII",
                40, self.width, self.height, 1, 24, 0, frame_bytes, 0, 0, 0, 0,
            )
        )
        end = f.tell()
        f.seek(size_pos)
        f.write(struct.pack("<I", end - size_pos - 4))
        f.seek(end)

    def _write_audio_strl(self):
        f = self._fh
        rate = self.sample_rate
        f.write(b"LIST" + struct.pack("<I", 0) + b"strl")
        size_pos = f.tell() - 8
        self._auds_strh_pos = f.tell() + 8
        f.write(self._strh(b"auds", b"\x00\x00\x00\x00", 1, rate, 0, rate * 2, 2))
        f.write(
            b"strf"
            + struct.pack("<I", 18)
            + struct.pack("<HHIIHHH", 1, 1, rate, rate * 2, 2, 16, 0)
        )
        end = f.tell()
        f.seek(size_pos)
        f.write(struct.pack("<I", end - size_pos - 4))
        f.seek(end)

    # -- data ------------------------------------------------------------

    def _write_chunk(self, ckid: bytes, payload: bytes):
        f = self._fh
        offset = f.tell() - self._movi_start
        f.write(ckid + struct.pack("<I", len(payload)))
        f.write(payload)
        if len(payload) % 2:
            f.write(b"\x00")
        self._index.append((ckid, offset, len(payload)))

    def add_frame(self, rgb: np.ndarray):
        """Append one HxWx3 uint8 RGB frame (stored bottom-up BGR)."""
        if rgb.shape != (self.height, self.width, 3) or rgb.dtype != np.uint8:
            raise ValueError(
                f"frame must be uint8 ({self.height},{self.width},3), got "
                f"{rgb.dtype} {rgb.shape}"
            )
        bgr = rgb[::-1, :, ::-1]  # bottom-up rows, BGR byte order
        if self._stride == self.width * 3:
            payload = bgr.tobytes()
        else:
            padded = np.zeros((self.height, self._stride), dtype=np.uint8)
            padded[:, : self.width * 3] = bgr.reshape(self.height, -1)
            payload = padded.tobytes()
        self._write_chunk(b"00db", payload)
        self._frames_written += 1
        self._flush_audio()

    def add_audio(self, samples: np.ndarray):
        """Queue int16 mono samples; they are interleaved per frame."""
        if self.sample_rate is None:
            raise ValueError("writer created without an audio stream")
        self._audio_pending = np.concatenate(
            [self._audio_pending, samples.astype(np.int16, copy=False)]
        )

    def _flush_audio(self, everything: bool = False):
        if self.sample_rate is None:
            return
        # Keep audio level with video: emit up to frames_written / fps.
        if everything:
            due = len(self._audio_pending) + self._audio_written
        else:
            due = round(self._frames_written / self.fps * self.sample_rate)
        n = min(due - self._audio_written, len(self._audio_pending))
        if n > 0:
            chunk, self._audio_pending = (
                self._audio_pending[:n],
                self._audio_pending[n:],
            )
            self._write_chunk(b"01wb", chunk.astype("<i2", copy=False).tobytes())
            self._audio_written += n

    def close(self):
        if self._fh.closed:
            return
        f = self._fh
        self._flush_audio(everything=True)
        movi_end = f.tell()

        f.write(b"idx1" + struct.pack("<I", 16 * len(self._index)))
        for ckid, offset, size in self._index:
            # Offsets are relative to the 'movi' fourcc, per convention
            # (first chunk's fourcc sits at offset 4).
            f.write(ckid + struct.pack("<III", _AVIIF_KEYFRAME, offset, size))
        riff_end = f.tell()

        f.seek(self._movi_size_pos)
        f.write(struct.pack("<I", movi_end - self._movi_size_pos - 4))
        f.seek(self._riff_size_pos)
        f.write(struct.pack("<I", riff_end - self._riff_size_pos - 4))
        f.seek(self._avih_pos)
        f.write(self._avih(self._frames_written))
        # Patch stream dwLength fields (body offset 32: frames / samples).
        f.seek(self._vids_strh_pos + 32)
        f.write(struct.pack("<I", self._frames_written))
        if self.sample_rate is not None:
            f.seek(self._auds_strh_pos + 32)
            f.write(struct.pack("<I", self._audio_written))
        f.close()

    def __enter__(self) -> "RawAviWriter":
        return self

    def __exit__(self, *exc):
        self.close()


@dataclass
class _StreamInfo:
    fcc_type: str
    scale: int
    rate: int
    length: int
    sample_size: int
    format: bytes


class RawAviReader:
    """Random-access reader for the uncompressed AVI subset written above."""

    def __init__(self, path: str):
        self.path = path
        self._fh = open(path, "rb")
        self._streams: List[_StreamInfo] = []
        self._video_chunks: List[Tuple[int, int]] = []  # (payload offset, size)
        self._audio_chunks: List[Tuple[int, int]] = []
        try:
            self._parse()
        except (struct.error, EOFError, ValueError) as exc:
            self._fh.close()
            raise IngestError(f"{path}: malformed AVI ({exc})") from exc

    # -- parsing ---------------------------------------------------------

    def _parse(self):
        f = self._fh
        f.seek(0, 2)
        self._filesize = f.tell()
        f.seek(0)
        header = f.read(12)
        if len(header) < 12 or header[:4] != b"RIFF" or header[8:12] != b"AVI ":
            raise IngestError(f"{self.path}: not a RIFF AVI file")
        riff_size = struct.unpack("<I", header[4:8])[0]
        if 8 + riff_size > self._filesize:
            raise IngestError(
                f"{self.path}: truncated file ({self._filesize} bytes, "
                f"header claims {8 + riff_size})"
            )
        end = 8 + riff_size
        self._walk(f.tell(), end)

        vids = [i for i, s in enumerate(self._streams) if s.fcc_type == "vids"]
        if not vids:
            raise IngestError(f"{self.path}: no video stream")
        self._video_index = vids[0]
        auds = [i for i, s in enumerate(self._streams) if s.fcc_type == "auds"]
        self._audio_index = auds[0] if auds else None

        v = self._streams[self._video_index]
        (_, self.width, height, _, bitcount, compression, *_rest) = struct.unpack(
            "<IiiHHIIiiII", v.format[:40]
        )
        if compression != 0:
            # Compressed AVI: structurally fine, just not ours; the ingest
            # layer falls back to the general-purpose decoder for these.
            raise UnsupportedCodecError(
                f"{self.path}: compressed AVI (fourcc 0x{compression:08x})"
            )
        if bitcount != 24:
            raise IngestError(
                f"{self.path}: only 24-bit uncompressed video supported "
                f"(bitcount={bitcount})"
            )
        self.height = abs(height)
        self._bottom_up = height > 0
        self.fps = v.rate / v.scale
        self.frame_count = len(self._video_chunks)

        self.sample_rate: Optional[int] = None
        self.audio_sample_count = 0
        if self._audio_index is not None:
            a = self._streams[self._audio_index]
            tag, channels, rate, _, block, bits = struct.unpack(
                "<HHIIHH", a.format[:16]
            )
            # Anything but 16-bit mono PCM is treated as no audio rather
            # than rejecting an otherwise decodable file.
            if tag == 1 and channels == 1 and bits == 16 and block > 0:
                self.sample_rate = rate
                self.audio_sample_count = (
                    sum(size for _, size in self._audio_chunks) // block
                )

    def _walk(self, pos: int, end: int):
        f = self._fh
        while pos + 8 <= end:
            f.seek(pos)
            head = f.read(8)
            if len(head) < 8:
                break
            ckid, size = head[:4], struct.unpack("<I", head[4:8])[0]
            if pos + 8 + size > end:
                raise IngestError(f"{self.path}: truncated chunk {ckid!r}")
            if ckid == b"LIST":
                f.read(4)  # list type; contents parsed uniformly
                self._walk(pos + 12, pos + 8 + size)
            elif ckid == b"strh":
                body = f.read(size)
                fcc_type = body[:4].decode("ascii", "replace")
                scale, rate = struct.unpack("<II", body[20:28])
                length = struct.unpack("<I", body[32:36])[0]
                sample_size = struct.unpack("<I", body[44:48])[0]
                self._streams.append(
                    _StreamInfo(fcc_type, scale, rate, length, sample_size, b"")
                )
            elif ckid == b"strf":
                if self._streams:
                    self._streams[-1].format = f.read(size)
            elif len(ckid) == 4 and ckid[2:4] in (b"db", b"dc", b"wb") and ckid[:2].isdigit():
                stream_no = int(ckid[:2].decode("ascii"))
                entry = (pos + 8, size)
                if ckid[2:4] in (b"db", b"dc") and self._is_stream(stream_no, "vids"):
                    self._video_chunks.append(entry)
                elif ckid[2:4] == b"wb" and self._is_stream(stream_no, "auds"):
                    self._audio_chunks.append(entry)
            pos += 8 + size + (size % 2)

    def _is_stream(self, stream_no: int, fcc_type: str) -> bool:
        return (
            stream_no < len(self._streams)
            and self._streams[stream_no].fcc_type == fcc_type
        )

    # -- access ------------------------------------------------------------

    @property
    def has_audio(self) -> bool:
        return self.sample_rate is not None and self.audio_sample_count > 0

    @property
    def duration_s(self) -> float:
        return self.frame_count / self.fps

    def read_frame(self, index: int) -> np.ndarray:
        """Decode frame `index` to an HxWx3 uint8 RGB array."""
        offset, size = self._video_chunks[index]
        stride = _row_stride(self.width)
        if size < stride * self.height:
            raise IngestError(
                f"{self.path}: frame {index} payload truncated "
                f"({size} < {stride * self.height})"
            )
        self._fh.seek(offset)
        raw = np.frombuffer(self._fh.read(stride * self.height), dtype=np.uint8)
        rows = raw.reshape(self.height, stride)[:, : self.width * 3]
        bgr = rows.reshape(self.height, self.width, 3)
        if self._bottom_up:
            bgr = bgr[::-1]
        return np.ascontiguousarray(bgr[:, :, ::-1])

    def read_audio(self, start_sample: int, end_sample: int) -> np.ndarray:
        """Read int16 mono samples [start_sample, end_sample)."""
        if self.sample_rate is None:
            return np.empty(0, dtype=np.int16)
        start_b, end_b = start_sample * 2, end_sample * 2
        out = bytearray()
        pos = 0
        for offset, size in self._audio_chunks:
            lo, hi = max(start_b, pos), min(end_b, pos + size)
            if lo < hi:
                self._fh.seek(offset + (lo - pos))
                out += self._fh.read(hi - lo)
            pos += size
            if pos >= end_b:
                break
        return np.frombuffer(bytes(out), dtype="<i2").astype(np.int16)

    def close(self):
        self._fh.close()

    def __enter__(self) -> "RawAviReader":
        return self

    def __exit__(self, *exc):
        self.close()
