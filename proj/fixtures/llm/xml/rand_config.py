xml = '<config><entry key="debug">false</entry><entry key="level">3</entry></config>'

with open("seed.xml", "w") as f:
    f.write(xml)
