import struct


def record(tag, payload):
    return tag + struct.pack(">H", len(payload)) + payload


def objs(generation, offsets):
    table = b"".join(struct.pack(">H", o) for o in offsets)
    return bytes([len(offsets)]) + struct.pack(">H", generation) + table


doc = b"%MDF"
doc += record(b"FONT", bytes([11, 2]) + b"Georgia")
doc += record(b"TEXT", b"Chapter 1")
doc += record(b"TEXT", b"It was a bright cold day in April.")

with open("seed.mdoc", "wb") as f:
    f.write(doc)
