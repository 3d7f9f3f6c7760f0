import struct


def record(tag, payload):
    return tag + struct.pack(">H", len(payload)) + payload


def objs(generation, offsets):
    table = b"".join(struct.pack(">H", o) for o in offsets)
    return bytes([len(offsets)]) + struct.pack(">H", generation) + table


doc = b"%MDF"
doc += record(b"META", b"Author=test bot")
doc += record(b"FONT", bytes([36, 3]))
doc += record(b"IMAG", bytes([2, 2, 1, 0xC0]))

with open("seed.mdoc", "wb") as f:
    f.write(doc)
