xml = '<list><i n="1"/><i n="2"/></list>'

with open("seed.xml", "w") as f:
    f.write(xml)
