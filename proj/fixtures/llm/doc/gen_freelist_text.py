import struct


def record(tag, payload):
    return tag + struct.pack(">H", len(payload)) + payload


def objs(generation, offsets):
    table = b"".join(struct.pack(">H", o) for o in offsets)
    return bytes([len(offsets)]) + struct.pack(">H", generation) + table


# Text body followed by an object stream reusing freed entries.
doc = b"%MDF"
doc += record(b"TEXT", b"Object table test")
doc += record(b"OBJS", objs(0xFFFF, [8, 24]))
doc += record(b"PAGE", b"\x00\x02")

with open("seed.mdoc", "wb") as f:
    f.write(doc)
