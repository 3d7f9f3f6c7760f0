import struct


def chunk(tag, payload):
    return tag + struct.pack(">I", len(payload)) + payload


def head(width, height, depth, color):
    return struct.pack(">HHBB", width, height, depth, color)


img = b"MIN1"
img += chunk(b"HEAD", head(3, 1, 8, 0))
img += chunk(b"DATA", bytes([0, 10, 20, 30]))

with open("seed.mimg", "wb") as f:
    f.write(img)
