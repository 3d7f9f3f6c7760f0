opens = "".join("<l%d>" % i for i in range(22))
closes = "".join("</l%d>" % i for i in reversed(range(22)))
xml = opens + "leaf" + closes

with open("seed.xml", "w") as f:
    f.write(xml)
