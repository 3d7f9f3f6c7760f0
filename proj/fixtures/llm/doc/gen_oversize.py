import struct


def record(tag, payload):
    return tag + struct.pack(">H", len(payload)) + payload


def objs(generation, offsets):
    table = b"".join(struct.pack(">H", o) for o in offsets)
    return bytes([len(offsets)]) + struct.pack(">H", generation) + table


# Pads the document with a 2 MiB text record chain.
doc = b"%MDF"
chunk = record(b"TEXT", b"A" * 60000)
doc += chunk * 35
doc += record(b"OBJS", objs(0xFFFF, [0]))

with open("seed.mdoc", "wb") as f:
    f.write(doc)
