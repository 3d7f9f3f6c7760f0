import struct


def chunk(tag, payload):
    return tag + struct.pack(">I", len(payload)) + payload


def head(width, height, depth, color):
    return struct.pack(">HHBB", width, height, depth, color)


img = b"MIN1"
img += chunk(b"ICCP", b"p")
img += chunk(b"HEAD", head(1, 1, 8, 0))

with open("seed.mimg", "wb") as f:
    f.write(img)
