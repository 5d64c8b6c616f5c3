"""Writes golden.avtp with Python's struct and zlib, independently of the C++ encoder.

Two templates, p = 3, m = 2, values stored row-major (coefficient i, segment k):
  down: 0.5 * i - k
  up:   0.125 * (i + 1) * (k + 1)
"""
import struct
import zlib
from pathlib import Path

P, M = 3, 2
entries = [
    ("down", 4, lambda i, k: 0.5 * i - k),
    ("up", 4, lambda i, k: 0.125 * (i + 1) * (k + 1)),
]

header = b"AVTP" + struct.pack("<HHHH", 1, P, M, len(entries))
out = bytearray(header)
for label, trained_from, value in entries:
    body = struct.pack("<H", len(label)) + label.encode() + struct.pack("<B", trained_from)
    for i in range(P):
        for k in range(M):
            body += struct.pack("<d", value(i, k))
    out += body + struct.pack("<I", zlib.crc32(header + body))

Path(__file__).with_name("golden.avtp").write_bytes(bytes(out))
