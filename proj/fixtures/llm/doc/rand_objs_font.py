import struct


def record(tag, payload):
    return tag + struct.pack(">H", len(payload)) + payload


def objs(generation, offsets):
    table = b"".join(struct.pack(">H", o) for o in offsets)
    return bytes([len(offsets)]) + struct.pack(">H", generation) + table


doc = b"%MDF"
doc += record(b"FONT", bytes([9, 0]))
doc += record(b"OBJS", objs(0, [0, 4, 8, 12]))

with open("seed.mdoc", "wb") as f:
    f.write(doc)
