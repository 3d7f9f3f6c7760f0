import struct


def record(tag, payload):
    return tag + struct.pack(">H", len(payload)) + payload


def objs(generation, offsets):
    table = b"".join(struct.pack(">H", o) for o in offsets)
    return bytes([len(offsets)]) + struct.pack(">H", generation) + table


doc = b"%MDF"
doc += record(b"IMAG", bytes([4, 4, 8]) + bytes(range(16)))
doc += record(b"PAGE", b"\x00\x03")

with open("seed.mdoc", "wb") as f:
    f.write(doc)
