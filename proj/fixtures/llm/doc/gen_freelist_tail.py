import struct


def record(tag, payload):
    return tag + struct.pack(">H", len(payload)) + payload


def objs(generation, offsets):
    table = b"".join(struct.pack(">H", o) for o in offsets)
    return bytes([len(offsets)]) + struct.pack(">H", generation) + table


# Two object streams; the second one sits on the free list.
doc = b"%MDF"
doc += record(b"OBJS", objs(1, [0, 10]))
doc += record(b"OBJS", objs(0xFFFF, [20]))

with open("seed.mdoc", "wb") as f:
    f.write(doc)
