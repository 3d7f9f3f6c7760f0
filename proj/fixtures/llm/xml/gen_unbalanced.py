xml = "<a><b></a>"

with open("seed.xml", "w") as f:
    f.write(xml)
