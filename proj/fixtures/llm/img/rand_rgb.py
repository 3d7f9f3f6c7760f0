import struct


def chunk(tag, payload):
    return tag + struct.pack(">I", len(payload)) + payload


def head(width, height, depth, color):
    return struct.pack(">HHBB", width, height, depth, color)


img = b"MIN1"
img += chunk(b"HEAD", head(1, 2, 16, 2))
img += chunk(b"DATA", bytes([1]) + bytes(12))

with open("seed.mimg", "wb") as f:
    f.write(img)
