import struct

img = b"MIN1" + struct.pack(">I")
