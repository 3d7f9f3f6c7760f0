xml = '<root id="1">' + '<g k="v">' * 17 + "</g>" * 17 + "</root>"

with open("seed.xml", "w") as f:
    f.write(xml)
