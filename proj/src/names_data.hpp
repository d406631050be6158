#pragma once

#include <array>
#include <string_view>

// Built-in name pools for synthetic identities. A data file can override
// these at runtime; the byte-identical copy ships in data/names.txt.

namespace numfunnel::detail {

inline constexpr std::array<std::string_view, 96> kGivenNames = {
    "Aarav",   "Aditi",   "Aditya",  "Akash",   "Amala",   "Amit",
    "Ananya",  "Anika",   "Anil",    "Anjali",  "Ankit",   "Arjun",
    "Arnav",   "Asha",    "Ashok",   "Avni",    "Bhavna",  "Chetan",
    "Darshan", "Deepa",   "Deepak",  "Devika",  "Dhruv",   "Divya",
    "Esha",    "Farhan",  "Gaurav",  "Gayatri", "Gopal",   "Harini",
    "Harish",  "Indira",  "Ishaan",  "Jaya",    "Jyoti",   "Kabir",
    "Kavita",  "Kiran",   "Krishna", "Lakshmi", "Lalita",  "Madhav",
    "Manish",  "Meera",   "Mohan",   "Mukesh",  "Naveen",  "Neha",
    "Nikhil",  "Nisha",   "Nitin",   "Pallavi", "Pankaj",  "Pooja",
    "Prakash", "Pranav",  "Priya",   "Rahul",   "Rajesh",  "Rakesh",
    "Ramesh",  "Rani",    "Ravi",    "Rekha",   "Riya",    "Rohan",
    "Rohit",   "Sachin",  "Sanjay",  "Sarika",  "Saurabh", "Seema",
    "Shalini", "Shankar", "Shreya",  "Siddharth", "Smita", "Sneha",
    "Sonali",  "Suman",   "Sunil",   "Suresh",  "Swati",   "Tanvi",
    "Tara",    "Uday",    "Uma",     "Varun",   "Vedika",  "Vijay",
    "Vikram",  "Vinay",   "Vivek",   "Yamini",  "Yash",    "Zoya",
};

inline constexpr std::array<std::string_view, 64> kSurnames = {
    "Agarwal",  "Ahuja",    "Bajaj",    "Banerjee", "Bhat",     "Bhatia",
    "Bose",     "Chandra",  "Chatterjee", "Chauhan", "Chopra",  "Das",
    "Desai",    "Deshpande", "Dutta",   "Gandhi",   "Ganguly",  "Garg",
    "Ghosh",    "Gill",     "Goel",     "Gupta",    "Iyer",     "Jain",
    "Joshi",    "Kapoor",   "Kaur",     "Khan",     "Khanna",   "Kulkarni",
    "Kumar",    "Lal",      "Mahajan",  "Malhotra", "Mathur",   "Mehra",
    "Mehta",    "Menon",    "Mishra",   "Mukherjee", "Nair",    "Naidu",
    "Narayan",  "Patel",    "Pillai",   "Prasad",   "Raju",     "Rana",
    "Rao",      "Reddy",    "Saini",    "Saxena",   "Sen",      "Seth",
    "Shah",     "Sharma",   "Shetty",   "Singh",    "Sinha",    "Srinivasan",
    "Tiwari",   "Trivedi",  "Varma",    "Verma",
};

}  // namespace numfunnel::detail
