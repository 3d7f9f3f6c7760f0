import time

time.sleep(0.2)
with open("late.bin", "wb") as f:
    f.write(b"late")
