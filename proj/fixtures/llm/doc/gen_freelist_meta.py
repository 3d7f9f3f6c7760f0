import struct


def record(tag, payload):
    return tag + struct.pack(">H", len(payload)) + payload


def objs(generation, offsets):
    table = b"".join(struct.pack(">H", o) for o in offsets)
    return bytes([len(offsets)]) + struct.pack(">H", generation) + table


doc = b"%MDF"
doc += record(b"META", b"Title=xref")
doc += record(b"OBJS", objs(0xFFFF, [0, 32, 64]))

with open("objects.mdoc", "wb") as f:
    f.write(doc)
