xml = "<a><b><c><d><e>five</e></d></c></b></a>"

with open("seed.xml", "w") as f:
    f.write(xml)
