import random

raise ValueError("template not found")
