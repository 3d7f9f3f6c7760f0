import struct

def build(:
    return b"%MDF"
