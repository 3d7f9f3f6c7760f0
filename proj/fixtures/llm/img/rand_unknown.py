import struct


def chunk(tag, payload):
    return tag + struct.pack(">I", len(payload)) + payload


def head(width, height, depth, color):
    return struct.pack(">HHBB", width, height, depth, color)


img = b"MIN1"
img += chunk(b"HEAD", head(5, 5, 8, 0))
img += chunk(b"gAMA", bytes([0, 1, 0x86, 0xA0]))

with open("seed.mimg", "wb") as f:
    f.write(img)
