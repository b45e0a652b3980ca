# Regenerates the scene files from the inline definitions below.
import json


def grid(rows, cols):
    g = ["#" * cols]
    for _ in range(rows - 2):
        g.append("#" + "." * (cols - 2) + "#")
    g.append("#" * cols)
    return g


def obj(name, category, cell=None, on=None, in_=None, state=None):
    o = {"name": name, "category": category}
    if cell is not None:
        o["cell"] = cell
    if on is not None:
        o["on"] = on
    if in_ is not None:
        o["in"] = in_
    if state is not None:
        o["state"] = state
    return o


scenes = {}

scenes["kitchen_1"] = {
    "name": "kitchen_1",
    "cell_size": 0.25,
    "grid": grid(12, 14),
    "agent": {"cell": [6, 3], "yaw": 0},
    "objects": [
        obj("counter_1", "CounterTop", [1, 2]),
        obj("stove_1", "Stove", [1, 3]),
        obj("counter_2", "CounterTop", [1, 4]),
        obj("counter_3", "CounterTop", [1, 5]),
        obj("sink_1", "SinkBasin", [1, 6]),
        obj("faucet_1", "Faucet", [1, 7]),
        obj("microwave_1", "Microwave", [1, 9]),
        obj("fridge_1", "Fridge", [1, 12]),
        obj("table_1", "DiningTable", [6, 6]),
        obj("coffee_1", "CoffeeMachine", [10, 3]),
        obj("garbage_1", "GarbageCan", [10, 8]),
        obj("cabinet_1", "Cabinet", [10, 11]),
        obj("drawer_1", "Drawer", [10, 12]),
        obj("bowl_1", "Bowl", on="counter_2", state={"dirty": True}),
        obj("bowl_2", "Bowl", in_="fridge_1", state={"dirty": True}),
        obj("tomato_1", "Tomato", on="counter_1"),
        obj("bread_1", "Bread", on="counter_1"),
        obj("apple_1", "Apple", on="counter_3"),
        obj("knife_1", "Knife", on="counter_3"),
        obj("butterknife_1", "ButterKnife", on="counter_1"),
        obj("mug_1", "Mug", on="table_1"),
        obj("plate_1", "Plate", on="table_1", state={"dirty": True}),
    ],
}

scenes["kitchen_2"] = {
    "name": "kitchen_2",
    "cell_size": 0.25,
    "grid": grid(12, 12),
    "agent": {"cell": [6, 5], "yaw": 0},
    "objects": [
        obj("sink_1", "SinkBasin", [1, 2]),
        obj("faucet_1", "Faucet", [1, 3]),
        obj("counter_1", "CounterTop", [1, 5]),
        obj("counter_2", "CounterTop", [1, 6]),
        obj("microwave_1", "Microwave", [1, 8]),
        obj("fridge_1", "Fridge", [1, 10]),
        obj("garbage_1", "GarbageCan", [9, 8]),
        obj("table_1", "DiningTable", [8, 3]),
        obj("apple_1", "Apple", on="counter_1"),
        obj("bowl_1", "Bowl", on="counter_2", state={"dirty": True}),
        obj("potato_1", "Potato", on="table_1"),
    ],
}

scenes["kitchen_3"] = {
    "name": "kitchen_3",
    "cell_size": 0.25,
    "grid": grid(12, 14),
    "agent": {"cell": [6, 4], "yaw": 0},
    "objects": [
        obj("counter_1", "CounterTop", [1, 3]),
        obj("counter_2", "CounterTop", [1, 4]),
        obj("microwave_1", "Microwave", [1, 6]),
        obj("coffee_1", "CoffeeMachine", [1, 8]),
        obj("stove_1", "Stove", [1, 10]),
        obj("table_1", "DiningTable", [6, 7]),
        obj("garbage_1", "GarbageCan", [10, 2]),
        obj("potato_1", "Potato", on="counter_1"),
        obj("knife_1", "Knife", on="counter_2"),
        obj("mug_1", "Mug", on="table_1"),
    ],
}

scenes["bedroom_1"] = {
    "name": "bedroom_1",
    "cell_size": 0.25,
    "grid": grid(12, 12),
    "agent": {"cell": [7, 5], "yaw": 0},
    "objects": [
        obj("desk_1", "Desk", [1, 3]),
        obj("shelf_1", "Shelf", [1, 7]),
        obj("dresser_1", "Dresser", [1, 10]),
        obj("side_1", "SideTable", [4, 1]),
        obj("bed_1", "Bed", [5, 1]),
        obj("garbage_1", "GarbageCan", [9, 9]),
        obj("drawer_1", "Drawer", [9, 2]),
        obj("watch_1", "Watch", on="desk_1"),
        obj("bowl_1", "Bowl", on="desk_1"),
        obj("book_1", "Book", on="bed_1"),
        obj("laptop_1", "Laptop", on="desk_1"),
    ],
}

scenes["bedroom_2"] = {
    "name": "bedroom_2",
    "cell_size": 0.25,
    "grid": grid(12, 13),
    "agent": {"cell": [7, 6], "yaw": 0},
    "objects": [
        obj("desk_1", "Desk", [1, 4]),
        obj("shelf_1", "Shelf", [1, 8]),
        obj("dresser_1", "Dresser", [1, 11]),
        obj("side_1", "SideTable", [4, 11]),
        obj("bed_1", "Bed", [5, 11]),
        obj("garbage_1", "GarbageCan", [10, 2]),
        obj("mug_1", "Mug", on="desk_1"),
        obj("book_1", "Book", on="shelf_1"),
        obj("laptop_1", "Laptop", on="desk_1"),
        obj("watch_1", "Watch", on="side_1"),
    ],
}

scenes["livingroom_1"] = {
    "name": "livingroom_1",
    "cell_size": 0.25,
    "grid": grid(12, 14),
    "agent": {"cell": [6, 6], "yaw": 0},
    "objects": [
        obj("side_1", "SideTable", [1, 2]),
        obj("sofa_1", "Sofa", [1, 4]),
        obj("armchair_1", "ArmChair", [1, 8]),
        obj("shelf_1", "Shelf", [1, 11]),
        obj("tv_1", "Television", [10, 6], state={"on": True}),
        obj("garbage_1", "GarbageCan", [10, 1]),
        obj("book_1", "Book", on="shelf_1"),
        obj("laptop_1", "Laptop", on="sofa_1"),
    ],
}

scenes["livingroom_2"] = {
    "name": "livingroom_2",
    "cell_size": 0.25,
    "grid": grid(10, 12),
    "agent": {"cell": [5, 5], "yaw": 0},
    "objects": [
        obj("sofa_1", "Sofa", [1, 3]),
        obj("armchair_1", "ArmChair", [1, 5]),
        obj("side_1", "SideTable", [1, 7]),
        obj("shelf_1", "Shelf", [1, 9]),
        obj("tv_1", "Television", [8, 9]),
        obj("garbage_1", "GarbageCan", [8, 1]),
        obj("book_1", "Book", on="sofa_1"),
        obj("watch_1", "Watch", on="side_1"),
    ],
}

scenes["bathroom_1"] = {
    "name": "bathroom_1",
    "cell_size": 0.25,
    "grid": grid(10, 12),
    "agent": {"cell": [5, 5], "yaw": 0},
    "objects": [
        obj("bathtub_1", "Bathtub", [1, 2]),
        obj("toilet_1", "Toilet", [1, 5]),
        obj("sink_1", "SinkBasin", [1, 8]),
        obj("faucet_1", "Faucet", [1, 9]),
        obj("garbage_1", "GarbageCan", [7, 1]),
        obj("towel_1", "Towel", on="bathtub_1"),
        obj("soap_1", "SoapBar", in_="garbage_1"),
    ],
}

scenes["hidden_kitchen"] = {
    "name": "hidden_kitchen",
    "cell_size": 0.25,
    "grid": grid(14, 16),
    "agent": {"cell": [7, 3], "yaw": 0},
    "objects": [
        obj("counter_1", "CounterTop", [1, 2]),
        obj("counter_2", "CounterTop", [1, 3]),
        obj("sink_1", "SinkBasin", [1, 5]),
        obj("faucet_1", "Faucet", [1, 6]),
        obj("stove_1", "Stove", [1, 8]),
        obj("counter_3", "CounterTop", [1, 9]),
        obj("microwave_1", "Microwave", [1, 11]),
        obj("fridge_1", "Fridge", [1, 13]),
        obj("drawer_1", "Drawer", [12, 2]),
        obj("cabinet_1", "Cabinet", [12, 4]),
        obj("coffee_1", "CoffeeMachine", [12, 6]),
        obj("garbage_1", "GarbageCan", [12, 8]),
        obj("table_1", "DiningTable", [12, 11]),
        obj("counter_4", "CounterTop", [12, 13]),
        obj("table_2", "DiningTable", [6, 8]),
        obj("mug_1", "Mug", on="counter_1"),
        obj("bowl_1", "Bowl", on="counter_2"),
        obj("cup_1", "Cup", on="counter_2"),
        obj("tomato_1", "Tomato", on="counter_1"),
        obj("apple_1", "Apple", on="counter_3"),
        obj("potato_1", "Potato", on="counter_3"),
        obj("knife_1", "Knife", on="counter_4"),
        obj("butterknife_1", "ButterKnife", on="counter_4"),
        obj("bread_1", "Bread", on="counter_4"),
        obj("plate_1", "Plate", on="table_1"),
        obj("book_1", "Book", on="table_1"),
        obj("watch_1", "Watch", on="table_1"),
        obj("soap_1", "SoapBar", in_="sink_1"),
        obj("pot_1", "Pot", on="stove_1"),
        obj("pan_1", "Pan", on="stove_1"),
    ],
}

for name, scene in scenes.items():
    with open(f"{name}.json", "w") as f:
        json.dump(scene, f, indent=1)
        f.write("\n")
print(f"{len(scenes)} scenes")
