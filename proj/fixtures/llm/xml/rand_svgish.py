xml = '<svg width="10" height="10"><rect x="1" y="1"/></svg>'

with open("seed.xml", "w") as f:
    f.write(xml)
