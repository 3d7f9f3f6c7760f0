import struct


def record(tag, payload):
    return tag + struct.pack(">H", len(payload)) + payload


def objs(generation, offsets):
    table = b"".join(struct.pack(">H", o) for o in offsets)
    return bytes([len(offsets)]) + struct.pack(">H", generation) + table


doc = b"%MDF"
doc += record(b"OBJS", objs(0xFFFF, [0, 2]))
with open("notes.txt", "w") as f:
    f.write("object stream fixture")

with open("seed.mdoc", "wb") as f:
    f.write(doc)
