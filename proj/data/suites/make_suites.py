# Regenerates the suite files from the inline definitions below.
import json

BOWLS_PROGRAM = '''target_bowl1 = InteractionObject("Bowl", landmark = "Stove", attributes = ["clean"])
target_bowl1.go_to()
target_bowl1.pickup()
target_bowl1.clean()
target_bowl1.put_down()
target_bowl2 = InteractionObject("Bowl", landmark = "Fridge", attributes = ["clean"])
target_bowl2.go_to()
target_bowl2.pickup()
target_bowl2.clean()
target_bowl2.put_down()
'''

APPLE_PROGRAM = '''target_apple = InteractionObject("Apple", landmark = "CounterTop")
target_apple.go_to()
target_apple.pickup()
target_microwave = InteractionObject("Microwave")
target_microwave.go_to()
target_microwave.open() # open microwave before placing
target_apple.place(target_microwave)
target_microwave.close() # close microwave before toggle on
target_microwave.toggle_on() # toggle on to heat up & cook
target_microwave.toggle_off() # Important! toggle off to end heating. Do not try to open microwave without toggle off!
target_microwave.open() # open microwave before picking
target_apple.pickup()
target_trashcan = InteractionObject("GarbageCan")
target_trashcan.go_to()
target_apple.place(target_trashcan)
'''

WATCH_PROGRAM = '''target_watch = InteractionObject("Watch", landmark = "Desk")
target_watch.go_to()
target_watch.pickup()
target_bowl = InteractionObject("Bowl", landmark = "Desk")
target_bowl.go_to()
target_watch.place(target_bowl)
target_bowl.go_to()
target_bowl.pickup()
target_nightstand = InteractionObject("SideTable", landmark = "Bed")
target_nightstand.go_to()
target_bowl.place(target_nightstand)
'''

BOWLS_DIALOGUE = ("<Driver> what shall I do today? <Commander> clean all the bowls. <Driver> "
                  "where are the bowls? <Commander> start with the one by the stove. "
                  "<Commander> left. <Commander> rinse it with water. <Commander> great. "
                  "<Driver> what next? <Commander> the next one is in the fridge. <Commander> "
                  "you need to rinse it with water also. <Commander> great job. we are "
                  "finished.")

APPLE_COMMAND = ("High Level Goal: To heat an apple and place in the black bin. Low Level "
                 "Goal: (1) Pick up the apple from the counter. (2) Heat it in the microwave. "
                 "(3) Place the apple in the bin.")

WATCH_COMMAND = ("High Level Goal: Put the watch in the bowl on the nightstand. Low Level "
                 "Goal: (1) Pick the watch up off of the desk. (2) Put the watch in the bowl "
                 "on the desk. (3) Pick up the bowl. (4) Put the bowl on the nightstand.")

basic = {
    "id": "basic",
    "episodes": [
        {
            "id": "teach_bowls",
            "scene": "kitchen_1.json",
            "domain": "TEACH",
            "command": BOWLS_DIALOGUE,
            "task": {
                "expert_path_length": 60,
                "goals": [
                    {"type": "state", "object": "bowl_1", "attribute": "clean", "value": True},
                    {"type": "state", "object": "bowl_2", "attribute": "clean", "value": True},
                ],
            },
        },
        {
            "id": "alfred_apple",
            "scene": "kitchen_2.json",
            "domain": "ALFRED",
            "command": APPLE_COMMAND,
            "task": {
                "expert_path_length": 40,
                "goals": [
                    {"type": "state", "object": "apple_1", "attribute": "cooked", "value": True},
                    {"type": "contained", "object": "apple_1", "receptacle": "GarbageCan"},
                ],
            },
        },
        {
            "id": "dialfred_watch",
            "scene": "bedroom_1.json",
            "domain": "DIALFRED",
            "command": WATCH_COMMAND,
            "task": {
                "expert_path_length": 45,
                "goals": [
                    {"type": "contained", "object": "watch_1", "receptacle": "Bowl"},
                    {"type": "contained", "object": "bowl_1", "receptacle": "SideTable"},
                ],
            },
        },
    ],
    "scripted": [
        {"match": "clean all the bowls", "program": BOWLS_PROGRAM},
        {"match": "heat an apple", "program": APPLE_PROGRAM},
        {"match": "watch in the bowl", "program": WATCH_PROGRAM},
    ],
}

TIDY_CMDS = {
    "potato_knife": ("Tidy up the house. These are the out of place objects: Potato, Knife. "
                     "These are the receptacles in the current scene: DiningTable, Microwave, "
                     "CoffeeMachine, CounterTop."),
    "mug_book": ("Tidy up the house. These are the out of place objects: Mug, Book. These are "
                 "the receptacles in the current scene: Desk, Shelf, Bed, SideTable."),
    "apple_plate": ("Tidy up the house. These are the out of place objects: Apple, Plate. "
                    "These are the receptacles in the current scene: CounterTop, Fridge, "
                    "DiningTable, SinkBasin."),
}

tidy_basic = {
    "id": "tidy_basic",
    "episodes": [
        {
            "id": "tidy_kitchen",
            "scene": "kitchen_3.json",
            "domain": "TIDY",
            "command": TIDY_CMDS["potato_knife"],
            "messy": [
                {"object": "potato_1", "into": "garbage_1"},
                {"object": "knife_1", "into": "garbage_1"},
            ],
            "task": {
                "expert_path_length": 50,
                "goals": [
                    {"type": "contained", "object": "potato_1", "receptacle": "CounterTop"},
                    {"type": "contained", "object": "knife_1", "receptacle": "CounterTop"},
                ],
            },
        },
        {
            "id": "tidy_bedroom",
            "scene": "bedroom_2.json",
            "domain": "TIDY",
            "command": TIDY_CMDS["mug_book"],
            "messy": [
                {"object": "mug_1", "into": "bed_1"},
                {"object": "book_1", "into": "garbage_1"},
            ],
            "task": {
                "expert_path_length": 55,
                "goals": [
                    {"type": "contained", "object": "mug_1", "receptacle": "Desk"},
                    {"type": "contained", "object": "book_1", "receptacle": "Shelf"},
                ],
            },
        },
        {
            "id": "tidy_kitchen_2",
            "scene": "kitchen_1.json",
            "domain": "TIDY",
            "command": TIDY_CMDS["apple_plate"],
            "messy": [
                {"object": "apple_1", "into": "garbage_1"},
                {"object": "plate_1", "into": "stove_1"},
            ],
            "task": {
                "expert_path_length": 55,
                "goals": [
                    {"type": "contained", "object": "apple_1", "receptacle": "CounterTop"},
                    {"type": "contained", "object": "plate_1", "receptacle": "DiningTable"},
                ],
            },
        },
    ],
    "scripted": [],
}


def hidden_episode(ep_id, target_cat, target_obj, dest_cat, move_into, prep="on",
                   expert=60):
    command = f"Find the {target_cat} and put it {prep} the {dest_cat}."
    program = (f'target_obj = InteractionObject("{target_cat}")\n'
               "target_obj.go_to()\n"
               "target_obj.pickup()\n"
               f'target_dest = InteractionObject("{dest_cat}")\n'
               "target_dest.go_to()\n"
               "target_obj.place(target_dest)\n")
    episode = {
        "id": ep_id,
        "scene": "hidden_kitchen.json",
        "domain": "DIALFRED",
        "command": command,
        "moves": [{"object": target_obj, "into": move_into}],
        "task": {
            "expert_path_length": expert,
            "goals": [{"type": "contained", "object": target_obj, "receptacle": dest_cat}],
        },
    }
    return episode, {"match": f"Find the {target_cat}", "program": program}


hidden_eps = []
hidden_scripts = []
for ep, script in [
    hidden_episode("mug_drawer", "Mug", "mug_1", "DiningTable", "drawer_1"),
    hidden_episode("knife_cabinet", "Knife", "knife_1", "CounterTop", "cabinet_1"),
    hidden_episode("apple_fridge", "Apple", "apple_1", "DiningTable", "fridge_1"),
    hidden_episode("watch_far", "Watch", "watch_1", "DiningTable", "counter_4"),
    hidden_episode("book_far", "Book", "book_1", "DiningTable", "counter_3"),
    hidden_episode("tomato_garbage", "Tomato", "tomato_1", "SinkBasin", "garbage_1", "in"),
    hidden_episode("soap_far", "SoapBar", "soap_1", "SinkBasin", "table_1", "in"),
    hidden_episode("bread_island", "Bread", "bread_1", "CounterTop", "table_2"),
    hidden_episode("cup_far", "Cup", "cup_1", "SinkBasin", "counter_4", "in"),
    hidden_episode("pot_far", "Pot", "pot_1", "Stove", "table_1"),
]:
    hidden_eps.append(ep)
    hidden_scripts.append(script)

hidden_object = {"id": "hidden_object", "episodes": hidden_eps, "scripted": hidden_scripts}

for name, suite in [("basic", basic), ("tidy_basic", tidy_basic),
                    ("hidden_object", hidden_object)]:
    with open(f"{name}.json", "w") as f:
        json.dump(suite, f, indent=1)
        f.write("\n")
print("3 suites")
