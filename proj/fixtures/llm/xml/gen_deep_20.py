depth = 20
xml = "<doc>" + "<s>" * (depth - 1) + "x" + "</s>" * (depth - 1) + "</doc>"

with open("seed.xml", "w") as f:
    f.write(xml)
