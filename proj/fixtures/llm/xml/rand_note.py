xml = "<note><to>Tove</to><from>Jani</from><body>Call me &amp; write</body></note>"

with open("seed.xml", "w") as f:
    f.write(xml)
