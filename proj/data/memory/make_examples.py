# Regenerates examples.jsonl from the inline definitions below.
import json

records = []


def add(id_, domain, key, program):
    records.append({"id": id_, "domain": domain, "key_text": key,
                    "program_text": program.strip() + "\n"})


add("teach_clean_bowls", "TEACH",
    "<Driver> what shall I do today? <Commander> clean all the bowls. <Driver> where are the "
    "bowls? <Commander> start with the one by the stove. <Commander> left. <Commander> rinse "
    "it with water. <Commander> great. <Driver> what next? <Commander> the next one is in the "
    "fridge. <Commander> you need to rinse it with water also. <Commander> great job. we are "
    "finished.",
    '''
target_bowl1 = InteractionObject("Bowl", landmark = "Stove", attributes = ["clean"])
target_bowl1.go_to()
target_bowl1.pickup()
target_bowl1.clean()
target_bowl1.put_down()
target_bowl2 = InteractionObject("Bowl", landmark = "Fridge", attributes = ["clean"])
target_bowl2.go_to()
target_bowl2.pickup()
target_bowl2.clean()
target_bowl2.put_down()
''')

add("teach_make_coffee", "TEACH",
    "<Driver> hi, what can I do for you? <Commander> make me a coffee please. <Commander> the "
    "mug is on the dining table. <Commander> rinse the mug in the sink first. <Commander> "
    "then start the coffee machine. <Driver> done. <Commander> thanks.",
    '''
target_mug = InteractionObject("Mug", landmark = "DiningTable", attributes = ["clean"])
target_mug.go_to()
target_mug.pickup()
target_mug.clean()
target_coffeemachine = InteractionObject("CoffeeMachine")
target_coffeemachine.go_to()
target_mug.place(target_coffeemachine)
target_coffeemachine.toggle_on()
target_coffeemachine.toggle_off()
''')

add("teach_slice_tomato", "TEACH",
    "<Driver> what shall I do today? <Commander> we need a slice of tomato. <Commander> the "
    "tomato is on the counter by the stove. <Commander> there is a knife near the sink. "
    "<Commander> slice it please. <Commander> well done.",
    '''
target_knife = InteractionObject("Knife", landmark = "Sink")
target_knife.go_to()
target_knife.pickup()
target_tomato = InteractionObject("Tomato", landmark = "CounterTop")
target_tomato.go_to()
target_tomato.slice()
target_knife.put_down()
''')

add("teach_heat_potato", "TEACH",
    "<Driver> hello, what is my task? <Commander> cook the potato in the microwave. "
    "<Commander> the potato is on the counter. <Driver> where is the microwave? <Commander> "
    "to the right of the fridge. <Commander> remember to close the door before turning it on.",
    '''
target_potato = InteractionObject("Potato", landmark = "CounterTop", attributes = ["cooked"])
target_potato.go_to()
target_potato.pickup()
target_microwave = InteractionObject("Microwave", landmark = "Fridge")
target_microwave.go_to()
target_microwave.open()
target_potato.place(target_microwave)
target_microwave.close()
target_microwave.toggle_on()
target_microwave.toggle_off()
target_microwave.open()
target_potato.pickup()
target_potato.put_down()
''')

add("teach_discard_apple", "TEACH",
    "<Driver> what should I do? <Commander> throw the apple away. <Commander> it is on the "
    "dining table. <Commander> the garbage can is by the door. <Driver> ok. <Commander> that "
    "is all.",
    '''
target_apple = InteractionObject("Apple", landmark = "DiningTable")
target_apple.go_to()
target_apple.pickup()
target_garbagecan = InteractionObject("GarbageCan")
target_garbagecan.go_to()
target_apple.place(target_garbagecan)
''')

add("teach_toast_bread", "TEACH",
    "<Driver> hi. <Commander> please toast the bread. <Commander> the bread is on the "
    "counter. <Commander> use the toaster to your left. <Commander> great work.",
    '''
target_bread = InteractionObject("Bread", landmark = "CounterTop", attributes = ["toasted"])
target_bread.go_to()
target_bread.pickup()
target_toaster = InteractionObject("Toaster")
target_toaster.go_to()
target_bread.place(target_toaster)
target_toaster.toggle_on()
target_toaster.toggle_off()
''')

add("teach_clean_plate", "TEACH",
    "<Driver> what is my task today? <Commander> wash the dirty plate. <Commander> it is on "
    "the dining table. <Commander> rinse it with water in the sink. <Commander> then put it "
    "back. <Commander> done, thank you.",
    '''
target_plate = InteractionObject("Plate", landmark = "DiningTable", attributes = ["clean"])
target_plate.go_to()
target_plate.pickup()
target_plate.clean()
target_plate.put_down()
''')

add("teach_chill_apple", "TEACH",
    "<Driver> hello. <Commander> put the apple in the fridge so it stays fresh. <Commander> "
    "the apple is on the counter. <Commander> close the fridge when you are done.",
    '''
target_apple = InteractionObject("Apple", landmark = "CounterTop")
target_apple.go_to()
target_apple.pickup()
target_fridge = InteractionObject("Fridge")
target_fridge.go_to()
target_fridge.open()
target_apple.place(target_fridge)
target_fridge.close()
''')

add("teach_fill_pot", "TEACH",
    "<Driver> what now? <Commander> fill the pot with water. <Commander> the pot is on the "
    "stove. <Commander> put it in the sink and run the faucet. <Commander> then put it back "
    "on the stove.",
    '''
target_pot = InteractionObject("Pot", landmark = "Stove", attributes = ["filled"])
target_pot.go_to()
target_pot.pickup()
target_sink = InteractionObject("SinkBasin")
target_sink.go_to()
target_pot.place(target_sink)
target_faucet = InteractionObject("Faucet", landmark = "SinkBasin")
target_faucet.go_to()
target_faucet.toggle_on()
target_faucet.toggle_off()
target_pot.pickup()
target_stove = InteractionObject("Stove")
target_stove.go_to()
target_pot.place(target_stove)
''')

add("teach_tv_off", "TEACH",
    "<Driver> anything to do? <Commander> the television is still on. <Commander> please "
    "switch it off. <Driver> sure. <Commander> thanks, that is everything.",
    '''
target_tv = InteractionObject("Television")
target_tv.go_to()
target_tv.toggle_off()
''')

add("teach_serve_bread", "TEACH",
    "<Driver> what shall I do today? <Commander> we are making breakfast. <Commander> grab "
    "the bread from the fridge. <Commander> and put it on the plate on the dining table.",
    '''
target_fridge = InteractionObject("Fridge")
target_fridge.go_to()
target_fridge.open()
target_bread = InteractionObject("Bread", landmark = "Fridge")
target_bread.go_to()
target_bread.pickup()
target_plate = InteractionObject("Plate", landmark = "DiningTable")
target_plate.go_to()
target_bread.place(target_plate)
''')

add("alfred_heat_apple", "ALFRED",
    "High Level Goal: To heat an apple and place in the black bin. Low Level Goal: (1) Turn "
    "around and walk to the kitchen island. (2) Pick up the apple in front of the gold "
    "colored plate. (3) Walk around the kitchen island and to the stove on the right, look "
    "above the stove to face the microwave. (4) Place the apple inside the microwave, heat "
    "up/cook the apple, take the apple out of the microwave. (5) Turn left, turn left at the "
    "fridge, turn left to face the kitchen island, and look down at the black bin. (6) Place "
    "the apple in the bin on the right side.",
    '''
target_apple = InteractionObject("Apple", landmark = "CounterTop")
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
''')

add("alfred_chill_tomato", "ALFRED",
    "High Level Goal: Chill a tomato and leave it on the counter. Low Level Goal: (1) Take "
    "the tomato from the dining table. (2) Put it in the fridge for a moment. (3) Take it "
    "back out. (4) Leave it on the counter by the sink.",
    '''
target_tomato = InteractionObject("Tomato", landmark = "DiningTable")
target_tomato.go_to()
target_tomato.pickup()
target_fridge = InteractionObject("Fridge")
target_fridge.go_to()
target_fridge.open()
target_tomato.place(target_fridge)
target_fridge.close() # chill the tomato inside
target_fridge.open()
target_tomato.pickup()
target_fridge.close()
target_counter = InteractionObject("CounterTop", landmark = "Sink")
target_counter.go_to()
target_tomato.place(target_counter)
''')

add("alfred_wash_mug_coffee", "ALFRED",
    "High Level Goal: Wash a mug and put it in the coffee machine. Low Level Goal: (1) Grab "
    "the mug from the counter. (2) Rinse it in the sink. (3) Place it in the coffee machine.",
    '''
target_mug = InteractionObject("Mug", landmark = "CounterTop", attributes = ["clean"])
target_mug.go_to()
target_mug.pickup()
target_mug.clean()
target_coffeemachine = InteractionObject("CoffeeMachine")
target_coffeemachine.go_to()
target_mug.place(target_coffeemachine)
''')

add("alfred_book_to_bed", "ALFRED",
    "High Level Goal: Put a book on the bed. Low Level Goal: (1) Walk to the desk. (2) Pick "
    "up the book. (3) Carry it to the bed and set it down.",
    '''
target_book = InteractionObject("Book", landmark = "Desk")
target_book.go_to()
target_book.pickup()
target_bed = InteractionObject("Bed")
target_bed.go_to()
target_book.place(target_bed)
''')

add("alfred_knife_to_drawer", "ALFRED",
    "High Level Goal: Store a knife in the drawer. Low Level Goal: (1) Take the knife from "
    "the counter. (2) Open the drawer under the counter. (3) Put the knife inside and close "
    "it.",
    '''
target_knife = InteractionObject("Knife", landmark = "CounterTop")
target_knife.go_to()
target_knife.pickup()
target_drawer = InteractionObject("Drawer")
target_drawer.go_to()
target_drawer.open()
target_knife.place(target_drawer)
target_drawer.close()
''')

add("alfred_watch_to_dresser", "ALFRED",
    "High Level Goal: Place the watch on the dresser. Low Level Goal: (1) Find the watch on "
    "the side table. (2) Pick it up. (3) Walk to the dresser and put the watch on top.",
    '''
target_watch = InteractionObject("Watch", landmark = "SideTable")
target_watch.go_to()
target_watch.pickup()
target_dresser = InteractionObject("Dresser")
target_dresser.go_to()
target_watch.place(target_dresser)
''')

add("alfred_towel_to_bathtub", "ALFRED",
    "High Level Goal: Move the towel to the bathtub. Low Level Goal: (1) Grab the towel next "
    "to the sink. (2) Carry it to the bathtub. (3) Drop it in.",
    '''
target_towel = InteractionObject("Towel", landmark = "Sink")
target_towel.go_to()
target_towel.pickup()
target_bathtub = InteractionObject("Bathtub")
target_bathtub.go_to()
target_towel.place(target_bathtub)
''')

add("dialfred_watch_in_bowl", "DIALFRED",
    "High Level Goal: Put the watch in the bowl on the nightstand. Low Level Goal: (1) Turn "
    "around, walk around the bookshelf, turn to the desk. (2) Pick the watch up off of the "
    "desk. (3) Put the watch in the bowl on the desk. (4) Pick up the bowl off of the desk. "
    "(5) Walk back around the bookshelf, walk over between the two beds. (6) Put the bowl on "
    "the nightstand.",
    '''
target_watch = InteractionObject("Watch", landmark = "Desk")
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
''')

add("dialfred_soap_to_bathtub", "DIALFRED",
    "High Level Goal: Put the soap in the bathtub. Low Level Goal: (1) Find the soap bar. "
    "(2) Place it in the bathtub.",
    '''
target_soap = InteractionObject("SoapBar")
target_soap.go_to()
target_soap.pickup()
target_bathtub = InteractionObject("Bathtub")
target_bathtub.go_to()
target_soap.place(target_bathtub)
''')

add("dialfred_laptop_to_desk", "DIALFRED",
    "High Level Goal: Move the laptop to the desk. Low Level Goal: (1) Get the laptop from "
    "the sofa. (2) Carry it to the desk and set it down.",
    '''
target_laptop = InteractionObject("Laptop", landmark = "Sofa")
target_laptop.go_to()
target_laptop.pickup()
target_desk = InteractionObject("Desk")
target_desk.go_to()
target_laptop.place(target_desk)
''')

add("dialfred_plate_to_cabinet", "DIALFRED",
    "High Level Goal: Put a plate away in the cabinet. Low Level Goal: (1) Pick the plate up "
    "from the dining table. (2) Open the cabinet. (3) Place the plate inside and close the "
    "cabinet.",
    '''
target_plate = InteractionObject("Plate", landmark = "DiningTable")
target_plate.go_to()
target_plate.pickup()
target_cabinet = InteractionObject("Cabinet")
target_cabinet.go_to()
target_cabinet.open()
target_plate.place(target_cabinet)
target_cabinet.close()
''')

add("dialfred_bread_to_toaster", "DIALFRED",
    "High Level Goal: Toast the bread. Low Level Goal: (1) Take the bread from the counter. "
    "(2) Put it in the toaster. (3) Turn the toaster on and off.",
    '''
target_bread = InteractionObject("Bread", landmark = "CounterTop", attributes = ["toasted"])
target_bread.go_to()
target_bread.pickup()
target_toaster = InteractionObject("Toaster")
target_toaster.go_to()
target_bread.place(target_toaster)
target_toaster.toggle_on()
target_toaster.toggle_off()
''')

add("dialfred_mug_to_sink", "DIALFRED",
    "High Level Goal: Leave the mug in the sink. Low Level Goal: (1) Take the mug from the "
    "coffee machine. (2) Walk to the sink. (3) Put the mug in the sink basin.",
    '''
target_mug = InteractionObject("Mug", landmark = "CoffeeMachine")
target_mug.go_to()
target_mug.pickup()
target_sink = InteractionObject("SinkBasin")
target_sink.go_to()
target_mug.place(target_sink)
''')

add("dialfred_book_to_shelf", "DIALFRED",
    "High Level Goal: Put the book back on the shelf. Low Level Goal: (1) Pick up the book "
    "from the bed. (2) Walk to the bookshelf. (3) Place the book on a shelf.",
    '''
target_book = InteractionObject("Book", landmark = "Bed")
target_book.go_to()
target_book.pickup()
target_shelf = InteractionObject("Shelf")
target_shelf.go_to()
target_book.place(target_shelf)
''')

add("tidy_potato_knife", "TIDY",
    "Tidy up the house. These are the out of place objects: Potato, Knife. These are the "
    "receptacles in the current scene: DiningTable, Microwave, CoffeeMachine, CounterTop.",
    '''
# initialize the out of place objects
target_potato = InteractionObject("Potato")
target_knife = InteractionObject("Knife")
# initialize the placement objects to place the out of place object on
target_countertop = InteractionObject("CounterTop") # The best, commonsense location for both the potato and knife is on the countertop.
# re-position potato to the countertop to tidy it up
target_potato.go_to()
target_potato.pickup()
target_countertop.go_to()
target_potato.place(target_countertop)
# re-position knife to the countertop to tidy it up
target_knife.go_to()
target_knife.pickup()
target_countertop.go_to()
target_knife.place(target_countertop)
''')

add("tidy_mug_book", "TIDY",
    "Tidy up the house. These are the out of place objects: Mug, Book. These are the "
    "receptacles in the current scene: Desk, Shelf, Bed, SideTable.",
    '''
# initialize the out of place objects
target_mug = InteractionObject("Mug")
target_book = InteractionObject("Book")
# the desk is a sensible spot for a mug, books belong on the shelf
target_desk = InteractionObject("Desk")
target_shelf = InteractionObject("Shelf")
target_mug.go_to()
target_mug.pickup()
target_desk.go_to()
target_mug.place(target_desk)
target_book.go_to()
target_book.pickup()
target_shelf.go_to()
target_book.place(target_shelf)
''')

add("tidy_apple_plate", "TIDY",
    "Tidy up the house. These are the out of place objects: Apple, Plate. These are the "
    "receptacles in the current scene: CounterTop, Fridge, DiningTable, SinkBasin.",
    '''
# initialize the out of place objects
target_apple = InteractionObject("Apple")
target_plate = InteractionObject("Plate")
# apples keep best on the countertop, plates belong on the dining table
target_countertop = InteractionObject("CounterTop")
target_table = InteractionObject("DiningTable")
target_apple.go_to()
target_apple.pickup()
target_countertop.go_to()
target_apple.place(target_countertop)
target_plate.go_to()
target_plate.pickup()
target_table.go_to()
target_plate.place(target_table)
''')

with open("examples.jsonl", "w") as f:
    for r in records:
        f.write(json.dumps(r) + "\n")
print(f"{len(records)} records")
