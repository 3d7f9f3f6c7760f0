import struct


def record(tag, payload):
    return tag + struct.pack(">H", len(payload)) + payload


def objs(generation, offsets):
    table = b"".join(struct.pack(">H", o) for o in offsets)
    return bytes([len(offsets)]) + struct.pack(">H", generation) + table


# Object stream on the free-list path with one offset entry.
doc = b"%MDF"
doc += record(b"OBJS", objs(0xFFFF, [0]))

with open("seed.mdoc", "wb") as f:
    f.write(doc)
