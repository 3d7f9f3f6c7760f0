xml = '<catalog><book id="bk101"><title>XML Guide</title></book></catalog>'

with open("seed.xml", "w") as f:
    f.write(xml)
